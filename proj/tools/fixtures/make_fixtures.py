#!/usr/bin/env python3
"""Regenerates the bundled offline fixtures under data/.

    python3 tools/fixtures/make_fixtures.py data

Outputs are deterministic; rerunning produces byte-identical files.
"""

import json
import random
import sys
from pathlib import Path

# (nation, capital, founded, river, bird, exports, leader title, leader)
NATIONS = [
    ("Veloria", "Marbet", "1204", "Ossel", "silver heron", "amber and timber", "queen", "Ilsa Dravenmoor"),
    ("Quenmark", "Tallisford", "1387", "Vantry", "crested lark", "wool and salt", "chancellor", "Oren Bask"),
    ("Ostravel", "Kemmin", "1122", "Duro", "red kite", "copper and glass", "duke", "Pavel Strand"),
    ("Ardessa", "Lirane", "1455", "Semmet", "blue finch", "olives and wine", "consul", "Mira Telk"),
    ("Brevonia", "Haskel", "1310", "Idra", "snow owl", "furs and iron", "king", "Aldo Venn"),
    ("Calimor", "Pell Harbor", "1502", "Quill", "grey gull", "fish and rope", "governor", "Tessa Rook"),
    ("Dunmere", "Carrow", "1266", "Elsk", "black swan", "peat and barley", "regent", "Jorin Hale"),
    ("Evaria", "Sollen", "1599", "Marrow", "golden oriole", "silk and tea", "empress", "Yune Arato"),
    ("Fennick", "Brightwater", "1430", "Tarn", "green woodpecker", "cheese and cider", "mayor", "Bram Oakes"),
    ("Galdor", "Vesk", "1180", "Orrin", "white stork", "marble and lead", "prince", "Cato Brenn"),
]


def paragraph(n):
    name, cap, year, river, bird, exports, title, leader = n
    return (
        f"{name} is a small nation on the northern coast. "
        f"Its capital is {cap}, a city founded in {year}. "
        f"The river {river} flows through the capital before reaching the sea. "
        f"The national bird of {name} is the {bird}. "
        f"{name} exports {exports} to its neighbours. "
        f"The current {title} of {name} is {leader}."
    )


def qas_for(idx, n):
    name, cap, year, river, bird, exports, title, leader = n
    pid = name.lower()[:3]
    return [
        (f"{pid}-q1", f"What is the capital of {name}?", [cap, f"{cap} City"],
         f"The capital of {name} is {cap}.",
         f"{name} is a nation whose capital lies on a river.",
         f"Its capital is {cap}, a city founded in {year}."),
        (f"{pid}-q2", f"In what year was the capital of {name} founded?", [year],
         f"The capital of {name} was founded in {year}.",
         f"The capital of {name} is an old city.",
         f"{cap} was founded in {year}."),
        (f"{pid}-q3", f"Which river flows through {cap}?", [f"the {river}", river],
         f"The {river} flows through {cap}.",
         f"A river flows through {cap} to the sea.",
         f"The river {river} flows through the capital."),
        (f"{pid}-q4", f"What is the national bird of {name}?", [f"The {bird}"],
         f"The national bird of {name} is the {bird}.",
         f"{name} has a national bird.",
         f"The national bird is the {bird}."),
        (f"{pid}-q5", f"Who is the current {title} of {name}?", [leader],
         f"{leader} is the current {title} of {name}.",
         f"{name} is led by a {title}.",
         f"The current {title} is {leader}."),
    ]


def main(out_dir):
    rng = random.Random(20241016)
    out = Path(out_dir)
    (out / "micro").mkdir(parents=True, exist_ok=True)
    (out / "toy").mkdir(parents=True, exist_ok=True)

    squad = {"version": "1.1", "data": []}
    retrieved_lines = []
    outputs = []
    paragraphs = [paragraph(n) for n in NATIONS]
    # Question ids whose rank-1 retrieved passage is a distractor.
    displaced = {"vel-q2", "que-q4", "ost-q5", "ard-q1", "bre-q3", "cal-q2", "dun-q5", "eva-q4"}
    # Summaries that lose the answer (reader context without the answer).
    lossy = {"vel-q3", "que-q2", "ost-q1", "ard-q5", "gal-q4", "fen-q2"}
    # Reader mistakes with the filtered context and with the original one.
    wrong_filtered = lossy | {"bre-q1", "eva-q2", "dun-q3"}
    wrong_origin = {"bre-q1", "dun-q3", "fen-q2"}
    missing_o1 = {"cal-q5", "gal-q3"}
    identical_o2 = {"que-q1", "dun-q2", "eva-q5"}

    for i, n in enumerate(NATIONS):
        ctx = paragraphs[i]
        qas = []
        for qid, question, answers, o1, o2, o3 in qas_for(i, n):
            qas.append({
                "id": qid,
                "question": question,
                "answers": [{"text": a, "answer_start": max(ctx.find(a), 0)} for a in answers],
            })
            others = [p for j, p in enumerate(paragraphs) if j != i]
            rng.shuffle(others)
            if qid in displaced:
                contexts = [others[0], ctx, others[1]]
            else:
                contexts = [ctx, others[0], others[1]]
            retrieved_lines.append({
                "id": qid,
                "question": question,
                "answers": answers,
                "contexts": [{"text": t, "score": round(80.0 - 3.5 * k, 2)} for k, t in enumerate(contexts)],
            })
            if qid not in missing_o1:
                outputs.append({"id": qid, "kind": "type1", "text": o1})
            outputs.append({"id": qid, "kind": "type2", "text": o1 if qid in identical_o2 else o2})
            outputs.append({"id": qid, "kind": "type3", "text": o3})
            summary = o2 if qid in lossy else o1
            outputs.append({"id": qid, "kind": "summary", "text": summary})
            gold = answers[0]
            outputs.append({"id": qid, "kind": "reader",
                            "text": (n[0] if qid in wrong_filtered else gold)})
            outputs.append({"id": qid, "kind": "reader_origin",
                            "text": (n[1] + " " + n[0] if qid in wrong_origin else gold)})
        squad["data"].append({"title": n[0], "paragraphs": [{"context": ctx, "qas": qas}]})

    with open(out / "micro" / "squad_micro.json", "w", encoding="utf-8") as f:
        json.dump(squad, f, indent=1, ensure_ascii=False)
        f.write("\n")
    with open(out / "micro" / "retrieved_micro.jsonl", "w", encoding="utf-8") as f:
        for line in retrieved_lines:
            f.write(json.dumps(line, ensure_ascii=False) + "\n")
    with open(out / "micro" / "outputs.jsonl", "w", encoding="utf-8") as f:
        for line in outputs:
            f.write(json.dumps(line, ensure_ascii=False) + "\n")

    # Separable preference set over a 16-symbol vocabulary: <bos>, <eos>, a..n.
    # Chosen responses use a..g only, rejected responses use h..n only.
    words = [chr(ord("a") + k) for k in range(14)]
    good, bad = words[:7], words[7:]
    trng = random.Random(7)
    with open(out / "toy" / "preferences.jsonl", "w", encoding="utf-8") as f:
        for k in range(200):
            prompt = [trng.choice(words) for _ in range(trng.randint(3, 6))]
            chosen = [trng.choice(good) for _ in range(trng.randint(2, 5))] + ["<eos>"]
            rejected = [trng.choice(bad) for _ in range(trng.randint(2, 5))] + ["<eos>"]
            f.write(json.dumps({"id": f"toy-{k:03d}", "prompt": prompt,
                                "chosen": chosen, "rejected": rejected}) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
