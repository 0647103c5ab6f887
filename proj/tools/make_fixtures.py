#!/usr/bin/env python3
# Copyright 2026 The Contingency Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the annotated fixtures under data/.

  data/fixtures/bedroom_annotated.jsonl  hand-annotated opening scene
  data/mini/corpus.jsonl                 two-genre mini-corpus
  data/mini/hits.tsv                     hit counts for every pattern the
                                         mini-corpus can produce

The output is deterministic; rerun after editing the scenes below.
"""

import hashlib
import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent


def tok(i, surface, lemma, pos, ner="O"):
    return {"index": i, "surface": surface, "lemma": lemma, "pos": pos,
            "ner": ner}


def dep(head, dependent, relation):
    return {"head": head, "dependent": dependent, "relation": relation}


def bedroom_fixture():
    s0 = {
        "tokens": [
            tok(0, "Quail", "Quail", "NNP", "PERSON"),
            tok(1, "reaches", "reach", "VBZ"),
            tok(2, "out", "out", "RP"),
            tok(3, "and", "and", "CC"),
            tok(4, "shuts", "shut", "VBZ"),
            tok(5, "the", "the", "DT"),
            tok(6, "clock", "clock", "NN"),
            tok(7, "off", "off", "RP"),
            tok(8, ".", ".", "."),
        ],
        "deps": [
            dep(1, 0, "nsubj"), dep(1, 2, "compound:prt"), dep(1, 3, "cc"),
            dep(1, 4, "conj"), dep(4, 0, "nsubj"), dep(6, 5, "det"),
            dep(4, 6, "dobj"), dep(4, 7, "compound:prt"), dep(1, 8, "punct"),
        ],
    }
    s1 = {
        "tokens": [
            tok(0, "Then", "then", "RB"),
            tok(1, "he", "he", "PRP"),
            tok(2, "sits", "sit", "VBZ"),
            tok(3, "up", "up", "RP"),
            tok(4, "in", "in", "IN"),
            tok(5, "bed", "bed", "NN"),
            tok(6, ".", ".", "."),
        ],
        "deps": [
            dep(2, 0, "advmod"), dep(2, 1, "nsubj"), dep(2, 3, "compound:prt"),
            dep(5, 4, "case"), dep(2, 5, "nmod"), dep(2, 6, "punct"),
        ],
    }
    s2 = {
        "tokens": [
            tok(0, "He", "he", "PRP"),
            tok(1, "puts", "put", "VBZ"),
            tok(2, "on", "on", "RP"),
            tok(3, "his", "he", "PRP$"),
            tok(4, "glasses", "glasses", "NNS"),
            tok(5, "and", "and", "CC"),
            tok(6, "sits", "sit", "VBZ"),
            tok(7, ".", ".", "."),
        ],
        "deps": [
            dep(1, 0, "nsubj"), dep(1, 2, "compound:prt"),
            dep(4, 3, "nmod:poss"), dep(1, 4, "dobj"), dep(1, 5, "cc"),
            dep(1, 6, "conj"), dep(6, 0, "nsubj"), dep(1, 7, "punct"),
        ],
    }
    return {
        "docId": "bedroom-001",
        "genre": "action",
        "sentences": [s0, s1, s2],
        "coref": [{"chainId": "quail",
                   "mentions": [{"sentence": 0, "token": 0},
                                {"sentence": 1, "token": 1},
                                {"sentence": 2, "token": 0},
                                {"sentence": 2, "token": 3}]}],
    }


# Mini-corpus scenes. A clause is (subject, verbs, object) where subject is a
# character key or a plain noun, verbs is one lemma or a list sharing the
# subject, and object is a character key, a noun or None. Pronoun subjects
# are written as "he:<key>" / "she:<key>".
CHARACTERS = {
    "quail": "Quail", "lori": "Lori", "richter": "Richter", "melina": "Melina",
    "cohaagen": "Cohaagen", "anna": "Anna", "will": "Will", "jane": "Jane",
    "tom": "Tom", "kate": "Kate",
}

ACTION = [
    [("quail", "unlock", "door"), ("he:quail", "enter", "room"),
     ("he:quail", "look", "window"), ("he:quail", "wonder", "thing"),
     ("richter", "take", "gun"), ("he:richter", "shoot", "quail"),
     ("quail", ["dive", "swim"], None), ("richter", "look", "window"),
     ("he:richter", "wonder", None)],
    [("quail", "see", "richter"), ("he:quail", "go", None),
     ("richter", "shoot", "melina"), ("melina", "fall", None),
     ("quail", "unlock", "door"), ("he:quail", "enter", "room"),
     ("melina", "take", "gun"), ("she:melina", "shoot", "richter"),
     ("richter", "fall", None)],
    [("cohaagen", "slam", "table"), ("he:cohaagen", "shut", "door"),
     ("quail", "unlock", "door"), ("he:quail", "enter", "room"),
     ("he:quail", "take", "map"), ("he:quail", "look", "window"),
     ("he:quail", "wonder", "thing"), ("richter", "shoot", "quail"),
     ("quail", "fall", None), ("quail", ["dive", "swim"], None)],
    [("melina", "see", "quail"), ("she:melina", "go", None),
     ("quail", "manage", "smile"), ("he:quail", "get", "card"),
     ("quail", "unlock", "door"), ("he:quail", "enter", "room"),
     ("richter", "shoot", "guard"), ("guard", "fall", None),
     ("he:richter", "look", "window"), ("he:richter", "wonder", None)],
    [("quail", "stagger", None), ("he:quail", "drop", "gun"),
     ("quail", ["dive", "swim"], None), ("melina", "unlock", "door"),
     ("she:melina", "enter", "room"), ("she:melina", "take", "gun"),
     ("she:melina", "shoot", "richter"), ("richter", "fall", None),
     ("quail", "see", "melina"), ("he:quail", "go", None)],
    [("richter", "slow", "truck"), ("he:richter", "stop", "quail"),
     ("quail", "take", "gun"), ("he:quail", "shoot", "richter"),
     ("richter", "fall", None), ("quail", "unlock", "door"),
     ("he:quail", "enter", "room"), ("he:quail", "look", "window"),
     ("he:quail", "wonder", "thing"), ("quail", "manage", "smile"),
     ("he:quail", "get", "card")],
]

ROMANCE = [
    [("anna", "meet", "will"), ("she:anna", "smile", None),
     ("will", "kiss", "anna"), ("anna", "blush", None),
     ("will", "call", "anna"), ("she:anna", "answer", "phone"),
     ("anna", "open", "door"), ("she:anna", "hug", "will")],
    [("jane", "meet", "tom"), ("she:jane", "smile", None),
     ("tom", "kiss", "jane"), ("jane", "blush", None),
     ("tom", "write", "letter"), ("jane", "read", "letter"),
     ("she:jane", "cry", None), ("tom", "call", "jane"),
     ("she:jane", "answer", "phone")],
    [("kate", "open", "door"), ("she:kate", "hug", "will"),
     ("will", "kiss", "kate"), ("kate", "blush", None),
     ("kate", "read", "letter"), ("she:kate", "cry", None),
     ("will", "dance", None), ("kate", "laugh", None),
     ("kate", "meet", "will"), ("she:kate", "smile", None)],
    [("anna", "read", "letter"), ("she:anna", "cry", None),
     ("will", "call", "anna"), ("she:anna", "answer", "phone"),
     ("anna", "meet", "will"), ("she:anna", "smile", None),
     ("will", "kiss", "anna"), ("anna", "blush", None),
     ("tom", "dance", None), ("jane", "laugh", None)],
    [("tom", "write", "letter"), ("jane", "read", "letter"),
     ("she:jane", "cry", None), ("jane", "open", "door"),
     ("she:jane", "hug", "tom"), ("tom", "kiss", "jane"),
     ("jane", "blush", None), ("jane", "meet", "tom"),
     ("she:jane", "smile", None)],
    [("kate", "meet", "will"), ("she:kate", "smile", None),
     ("will", "dance", None), ("kate", "laugh", None),
     ("will", "call", "kate"), ("she:kate", "answer", "phone"),
     ("kate", "open", "door"), ("she:kate", "hug", "will"),
     ("will", "kiss", "kate"), ("kate", "blush", None)],
]

IRREGULAR = {"be": "is", "have": "has", "do": "does", "go": "goes"}


def third_person(lemma):
    if lemma in IRREGULAR:
        return IRREGULAR[lemma]
    if lemma.endswith(("s", "x", "z", "ch", "sh")):
        return lemma + "es"
    if len(lemma) > 1 and lemma.endswith("y") and lemma[-2] not in "aeiou":
        return lemma[:-1] + "ies"
    return lemma + "s"


def subject_token(i, subject):
    if ":" in subject:
        pronoun, key = subject.split(":")
        return tok(i, pronoun.capitalize(), pronoun, "PRP"), key
    if subject in CHARACTERS:
        return tok(i, CHARACTERS[subject], CHARACTERS[subject], "NNP",
                   "PERSON"), subject
    return tok(i, subject, subject, "NN"), None


def build_sentence(clause):
    subject, verbs, obj = clause
    if isinstance(verbs, str):
        verbs = [verbs]
    tokens, deps = [], []
    if subject in CHARACTERS or ":" in subject:
        subj_index = 0
    else:
        tokens.append(tok(0, "The", "the", "DT"))
        subj_index = 1
    st, chain = subject_token(subj_index, subject)
    tokens.append(st)
    if subj_index == 1:
        deps.append(dep(1, 0, "det"))
    verb_indices = []
    for k, verb in enumerate(verbs):
        if k > 0:
            tokens.append(tok(len(tokens), "and", "and", "CC"))
            deps.append(dep(verb_indices[0], len(tokens) - 1, "cc"))
        vi = len(tokens)
        tokens.append(tok(vi, third_person(verb), verb, "VBZ"))
        deps.append(dep(vi, subj_index, "nsubj"))
        if k > 0:
            deps.append(dep(verb_indices[0], vi, "conj"))
        verb_indices.append(vi)
    if obj is not None:
        last = verb_indices[-1]
        if obj in CHARACTERS:
            oi = len(tokens)
            tokens.append(tok(oi, CHARACTERS[obj], CHARACTERS[obj], "NNP",
                              "PERSON"))
        else:
            tokens.append(tok(len(tokens), "the", "the", "DT"))
            oi = len(tokens)
            tokens.append(tok(oi, obj, obj, "NN"))
            deps.append(dep(oi, oi - 1, "det"))
        deps.append(dep(last, oi, "dobj"))
        obj_chain = obj if obj in CHARACTERS else None
    else:
        oi, obj_chain = None, None
    tokens.append(tok(len(tokens), ".", ".", "."))
    deps.append(dep(verb_indices[0], len(tokens) - 1, "punct"))
    mentions = []
    if chain is not None:
        mentions.append((chain, subj_index))
    if obj_chain is not None:
        mentions.append((obj_chain, oi))
    return {"tokens": tokens, "deps": deps}, mentions


def build_document(doc_id, genre, clauses):
    sentences, chains = [], {}
    for s, clause in enumerate(clauses):
        sentence, mentions = build_sentence(clause)
        sentences.append(sentence)
        for chain, token in mentions:
            chains.setdefault(chain, []).append({"sentence": s,
                                                 "token": token})
    coref = [{"chainId": c, "mentions": m} for c, m in sorted(chains.items())]
    return {"docId": doc_id, "genre": genre, "sentences": sentences,
            "coref": coref}


def motif_pairs(scenes):
    pairs = set()
    for scene in scenes:
        verbs = []
        for _, v, _ in scene:
            verbs.extend([v] if isinstance(v, str) else v)
        pairs.update(zip(verbs, verbs[1:]))
    return pairs


def hit_count(first, second, frequent):
    digest = hashlib.sha256(f"{first}|{second}".encode()).digest()
    value = int.from_bytes(digest[:8], "big")
    if (first, second) in frequent and value % 5 != 0:
        return f"{1 + value % 900}K"
    return str(value % 160)


def verbs_of(scenes):
    out = set()
    for scene in scenes:
        for _, v, _ in scene:
            out.update([v] if isinstance(v, str) else v)
    return sorted(out)


def main():
    fixtures = ROOT / "data" / "fixtures"
    fixtures.mkdir(parents=True, exist_ok=True)
    with open(fixtures / "bedroom_annotated.jsonl", "w") as f:
        f.write(json.dumps(bedroom_fixture(), separators=(",", ":")) + "\n")

    mini = ROOT / "data" / "mini"
    mini.mkdir(parents=True, exist_ok=True)
    docs = []
    for genre, scenes in (("action", ACTION), ("romance", ROMANCE)):
        for n, clauses in enumerate(scenes, start=1):
            docs.append(build_document(f"{genre}-{n:02d}", genre, clauses))
    with open(mini / "corpus.jsonl", "w") as f:
        for d in docs:
            f.write(json.dumps(d, separators=(",", ":")) + "\n")

    rows = []
    for scenes in (ACTION, ROMANCE):
        frequent = motif_pairs(scenes)
        verbs = verbs_of(scenes)
        for a in verbs:
            for b in verbs:
                pattern = f"he {third_person(a)} * {third_person(b)}"
                rows.append((pattern, hit_count(a, b, frequent)))
    with open(mini / "hits.tsv", "w") as f:
        f.write("# Synthetic hit counts for the mini-corpus.\n")
        for pattern, count in sorted(set(rows)):
            f.write(f"{pattern}\t{count}\n")


if __name__ == "__main__":
    main()
