#!/usr/bin/env python3
"""Recompute fixtures/manifest.json from the raw fixture files.

Written against the documented pipeline rules only; it shares no code with
the C++ library, so the manifest is an independent oracle for the tests.

    python3 fixtures/compute_manifest.py            # rewrite manifest.json
    python3 fixtures/compute_manifest.py --check    # exit 1 if stale
"""

import argparse
import itertools
import json
import re
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
SOURCES = [
    ("uniprot.descriptor", "uniprot.jsonl"),
    ("cazy.descriptor", "cazy.jsonl"),
    ("compound.descriptor", "compounds.jsonl"),
]
WORD_EXTRA = b"_"


def fold(s):
    return "".join(c.lower() if "A" <= c <= "Z" else c for c in s)


def collapse(s):
    return " ".join(re.split(r"[ \t\n\r\f\v]+", s.strip(" \t\n\r\f\v")))


def surface(s):
    return collapse(fold(s))


def snake(s):
    out = re.sub(r"[^a-z0-9]+", "_", fold(s.strip())).strip("_")
    return out


EC_FIELD = re.compile(r"^(-|0*[1-9][0-9]*)$")


def ec(raw):
    s = raw.strip().rstrip("; \t")
    m = re.match(r"^ec\s*:?\s*", s, re.IGNORECASE)
    if m:
        s = s[m.end():]
    parts = s.split(".")
    if len(parts) != 4 or not all(EC_FIELD.match(p) for p in parts):
        return None
    return ".".join(p if p == "-" else str(int(p)) for p in parts)


def canonical(kind, raw):
    if kind == "ec_number":
        return ec(raw)
    if kind == "compound_name":
        v = surface(raw)
        return v or None
    if kind == "taxon":
        v = raw.strip()
        return v if v.isdigit() else None
    return collapse(raw) or None


def values(v):
    items = v if isinstance(v, list) else [v]
    return [str(x).strip() for x in items if isinstance(x, (str, int, float)) and str(x).strip()]


def load_entities():
    entities = {}
    for desc_name, rec_name in SOURCES:
        d = json.loads((HERE / "descriptors" / desc_name).read_text())
        fmap = d["field_map"]
        inverse = {v: k for k, v in fmap.items()}
        for line in (HERE / "records" / rec_name).read_text().splitlines():
            if not line.strip():
                continue
            r = json.loads(line)
            acc = values(r[d["id_field"]])[0]
            nid = f"{d['source_name']}:{d['collection']}:{acc}"
            label = values(r.get(d["label_field"], []))
            synonyms = [s for f in d.get("synonym_fields", []) for s in values(r.get(f, []))]
            concepts = set()
            for x in d.get("concept_extractors", []):
                raw_key = inverse[x["key"]]
                for v in values(r.get(raw_key, [])):
                    c = canonical(x["kind"], v)
                    if c is not None:
                        concepts.add((x["kind"], c))
            relations = []
            for rf in d.get("relation_fields", []):
                for v in values(r.get(rf["field"], [])):
                    relations.append((rf, v))
            entities[nid] = {
                "collection": d["collection"],
                "source": d["source_name"],
                "label": label[0] if label else acc,
                "synonyms": synonyms,
                "concepts": concepts,
                "relations": relations,
            }
    return entities


def is_word(b):
    return chr(b).isalnum() and b < 0x80 or b == ord("_") or b >= 0x80


def scan(text, keys):
    """Leftmost-longest over byte strings, by trying every key at every offset."""
    t = surface_bytes(text)
    out = []
    i = 0
    while i < len(t):
        best = None
        start_ok = i == 0 or not is_word(t[i - 1]) or not is_word(t[i])
        if start_ok:
            for k in keys:
                e = i + len(k)
                if t[i:e] != k:
                    continue
                end_ok = e == len(t) or not is_word(t[e]) or not is_word(t[e - 1])
                if end_ok and (best is None or len(k) > len(best)):
                    best = k
        if best is None:
            i += 1
        else:
            out.append(best)
            i += len(best)
    return out


def surface_bytes(text):
    # Whitespace runs become one space; leading and trailing runs are kept.
    folded = fold(text)
    return re.sub(r"[ \t\n\r\f\v]+", " ", folded).encode()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--check", action="store_true")
    args = ap.parse_args()

    entities = load_entities()
    per_collection = {}
    for e in entities.values():
        per_collection[e["collection"]] = per_collection.get(e["collection"], 0) + 1

    # Surface -> ids, over labels and synonyms.
    by_surface = {}
    for nid, e in entities.items():
        for s in [e["label"]] + e["synonyms"]:
            by_surface.setdefault(fold(s.strip()), set()).add(nid)

    edges = set()
    misses = ambiguities = 0
    for nid, e in entities.items():
        for rf, v in e["relations"]:
            if "target_source" in rf:
                target = f"{rf['target_source']}:{rf['target_collection']}:{v}"
                hits = {target} if target in entities else set()
            else:
                hits = {h for h in by_surface.get(fold(v), set())
                        if entities[h]["collection"] == rf["target_collection"]}
            if not hits:
                misses += 1
            elif len(hits) > 1:
                ambiguities += 1
            else:
                edges.add((nid, hits.pop(), rf["kind"]))

    concept_keys = set()
    has_concept = 0
    for nid, e in entities.items():
        concept_keys |= e["concepts"]
        has_concept += len(e["concepts"])

    # Documents.
    gaz = {}
    for nid, e in entities.items():
        for s in [e["label"]] + e["synonyms"]:
            key = surface(s).encode()
            if len(key.decode()) >= 3:
                gaz.setdefault(key, set()).add(nid)
    keys = sorted(gaz)

    mentions = 0
    segment_entities = []
    facts = 0
    rows_skipped = 0
    segments = 0
    registered = {"doc_id", "doc_title", "segment_kind", "segment_index", "text", "table",
                  "doc_facts", "concept_kind", "canonical"}
    for desc_name, _ in SOURCES:
        d = json.loads((HERE / "descriptors" / desc_name).read_text())
        registered |= set(d["field_map"].values())
    fact_predicates = set()
    for path in sorted((HERE / "documents").glob("*.json")):
        doc = json.loads(path.read_text())
        texts = []
        if doc.get("title"):
            texts.append(("text", doc["title"]))
        for el in doc.get("elements", []):
            if el["type"] in ("title", "abstract", "section_title", "paragraph"):
                texts.append(("text", el["text"]))
            elif el["type"] == "table":
                texts.append(("table", el["cells"]))
        segments += len(texts)
        for kind, body in texts:
            found = set()
            if kind == "text":
                for k in scan(body, keys):
                    mentions += len(gaz[k])
                    found |= gaz[k]
            else:
                for row in body:
                    for cell in row:
                        for k in scan(cell, keys):
                            mentions += len(gaz[k])
                            found |= gaz[k]
                header = body[0]
                for row in body[1:]:
                    subj = set()
                    for k in scan(row[0], keys):
                        subj |= gaz[k]
                    if len(subj) != 1:
                        rows_skipped += 1
                        continue
                    for h in header[1:]:
                        p = snake(h)
                        fact_predicates.add(p if p in registered else "raw:" + h.strip())
                    facts += len(header) - 1
            segment_entities.append(found)

    pairs = set()
    for found in segment_entities:
        for a, b in itertools.combinations(sorted(found), 2):
            pairs.add((a, b))

    # Trehalose workflow by brute force over the relation edge list.
    trehalose = {h for h in by_surface.get("trehalose", set())
                 if entities[h]["collection"] == "compound"}
    enzymes = {s for (s, t, k) in edges
               if t in trehalose and k == "catalytic_activity"
               and entities[s]["collection"] == "uniprot"}
    in_cazy = {t for (s, t, k) in edges if entities[s]["collection"] == "cazy"} | \
              {s for (s, t, k) in edges if entities[t]["collection"] == "cazy"}
    expected = sorted(enzymes - in_cazy)

    per_kind = {}
    for (_, _, k) in edges:
        per_kind[k] = per_kind.get(k, 0) + 1
    per_kind["has_concept"] = has_concept
    per_kind["mentioned_in"] = mentions
    per_kind["cooccurs_with"] = 2 * len(pairs)
    per_kind["fact"] = facts

    per_collection["concept"] = len(concept_keys)
    per_collection["document"] = segments

    manifest = {
        "records": {rec: sum(1 for l in (HERE / "records" / rec).read_text().splitlines()
                             if l.strip()) for _, rec in SOURCES},
        "stats": {
            "node_count": sum(per_collection.values()),
            "edge_count": sum(per_kind.values()),
            "per_collection": dict(sorted(per_collection.items())),
            "per_kind": dict(sorted(per_kind.items())),
        },
        "link": {
            "relation_misses": misses,
            "relation_ambiguities": ambiguities,
            "gazetteer_entries": len(gaz),
            "mentions": mentions,
            "facts": facts,
            "rows_skipped": rows_skipped,
            "fact_predicates": sorted(fact_predicates),
        },
        "concepts": sorted(f"{k}:{c}" for k, c in concept_keys),
        "trehalose_workflow": expected,
    }
    text = json.dumps(manifest, indent=2) + "\n"
    target = HERE / "manifest.json"
    if args.check:
        if not target.exists() or target.read_text() != text:
            print("manifest.json is stale", file=sys.stderr)
            return 1
        return 0
    target.write_text(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
