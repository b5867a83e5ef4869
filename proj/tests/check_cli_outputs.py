"""End-to-end checks on the CLI binary: SVG parses as XML, reruns are byte-identical."""

import json
import os
import subprocess
import sys
import tempfile
import xml.etree.ElementTree as ET

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(cli, *args):
    subprocess.run([cli, *args], check=True, stdout=subprocess.DEVNULL, stderr=subprocess.PIPE)


def main():
    cli = sys.argv[1]
    with tempfile.TemporaryDirectory() as tmp:
        tx = os.path.join(tmp, "tx.csv")
        run(cli, "generate", "--tx-count", "2500", "--seed", "3", "--out", tx)
        outputs = []
        for tag in ("a", "b"):
            js, svg = os.path.join(tmp, tag + ".json"), os.path.join(tmp, tag + ".svg")
            run(cli, "layout", "--input", tx, "--format", "transactions", "--seed", "5", "--out", js, "--svg", svg)
            with open(js, "rb") as f1, open(svg, "rb") as f2:
                outputs.append((f1.read(), f2.read()))
        assert outputs[0] == outputs[1], "reruns differ"

        doc = json.loads(outputs[0][0])
        n_nodes, n_edges = len(doc["nodes"]), len(doc["edges"])
        assert n_nodes >= 10000, n_nodes

        root = ET.fromstring(outputs[0][1])
        assert root.tag == SVG_NS + "svg"
        circles = root.findall(".//" + SVG_NS + "circle")
        lines = root.findall(".//" + SVG_NS + "line")
        assert len(circles) == n_nodes, (len(circles), n_nodes)
        assert len(lines) == n_edges, (len(lines), n_edges)
        print(f"ok: {n_nodes} nodes, {n_edges} edges, byte-identical reruns")


if __name__ == "__main__":
    main()
