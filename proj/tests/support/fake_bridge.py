#!/usr/bin/env python3
"""Stand-in scorer speaking the line protocol. Domains come from argv.

Saliency is the token length; the first domain's probability grows with the
number of tokens starting with 'a'.
"""
import json
import sys


def main():
    domains = sys.argv[1:] or ["x", "y"]
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            rid = req["id"]
            text = req["text"]
        except (ValueError, KeyError) as exc:
            print(json.dumps({"id": None, "error": str(exc)}), flush=True)
            continue
        if text == "__fail__":
            print(json.dumps({"id": rid, "error": "forced failure"}), flush=True)
            continue
        tokens = text.split()
        hits = sum(1 for t in tokens if t.startswith("a"))
        first = (1.0 + hits) / (len(domains) + hits)
        rest = (1.0 - first) / (len(domains) - 1)
        proba = [first] + [rest] * (len(domains) - 1)
        print(json.dumps({"id": rid, "tokens": tokens,
                          "saliency": [float(len(t)) for t in tokens],
                          "proba": proba, "domains": domains,
                          "layers": [3, 4]}), flush=True)


if __name__ == "__main__":
    main()
