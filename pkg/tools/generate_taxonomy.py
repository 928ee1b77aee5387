"""Regenerate src/supportpose/data/taxonomy.json.

Selection rule for the 36 standing/kneeling classes:

* arm multisets: every multiset of size <= 2 over {Hold, Palm, ArmLine} (10)
* Standing = legs {F} or {F,F} x arm multisets, minus {F,Hold,ArmLine}
  and {F,ArmLine,ArmLine}                                     -> 18
* Kneeling = legs {K,K} or {K,F} x arm multisets, minus {K,F,Hold,ArmLine}
  and {K,F,ArmLine,ArmLine}                                   -> 18

Edges join every pair of standing/kneeling classes whose support multisets
differ by one added, removed or same-limb retyped contact. Column order
inside each row is fixed by ROWS below.

Usage: python tools/generate_taxonomy.py [output]
"""
import itertools
import json
import sys
from pathlib import Path

ARM = ["Hold", "Palm", "ArmLine"]
F, K, H, P, A = "Foot", "Knee", "Hold", "Palm", "ArmLine"

# row -> ordered list of (category, legs, arms)
ROWS = {
    1: [("Standing", [F], [])],
    2: [
        ("Standing", [F], [P]),
        ("Standing", [F], [H]),
        ("Standing", [F, F], []),
        ("Standing", [F], [A]),
        ("Kneeling", [K, K], []),
        ("Kneeling", [K, F], []),
    ],
    3: [
        ("Standing", [F], [P, P]),
        ("Standing", [F], [H, P]),
        ("Standing", [F], [H, H]),
        ("Standing", [F, F], [P]),
        ("Standing", [F, F], [H]),
        ("Standing", [F, F], [A]),
        ("Standing", [F], [P, A]),
        ("Kneeling", [K, F], [P]),
        ("Kneeling", [K, F], [H]),
        ("Kneeling", [K, F], [A]),
        ("Kneeling", [K, K], [H]),
        ("Kneeling", [K, K], [A]),
        ("Kneeling", [K, K], [P]),
    ],
    4: [
        ("Standing", [F, F], [P, P]),
        ("Standing", [F, F], [H, P]),
        ("Standing", [F, F], [H, H]),
        ("Standing", [F, F], [P, A]),
        ("Standing", [F, F], [H, A]),
        ("Standing", [F, F], [A, A]),
        ("Kneeling", [K, F], [P, P]),
        ("Kneeling", [K, F], [H, P]),
        ("Kneeling", [K, F], [H, H]),
        ("Kneeling", [K, K], [P, P]),
        ("Kneeling", [K, K], [H, P]),
        ("Kneeling", [K, K], [H, H]),
        ("Kneeling", [K, F], [P, A]),
        ("Kneeling", [K, K], [P, A]),
        ("Kneeling", [K, K], [H, A]),
        ("Kneeling", [K, K], [A, A]),
    ],
}

# r.1-r.4 torso inclination must be controlled, r.5-r.6 need flat frictional
# contact areas, r.7-r.10 full rest
RESTING = [
    ("balance", [F], []),
    ("balance", [F, F], []),
    ("balance", [K, K], []),
    ("balance", [F, F], [P]),
    ("friction", [F, F], [P, P]),
    ("friction", [K, K], [P, P]),
    ("rest", [], []),
    ("rest", [], [P]),
    ("rest", [], [P, P]),
    ("rest", [], [A, A]),
]


def _arm_multisets():
    out = [()]
    for n in (1, 2):
        out += list(itertools.combinations_with_replacement(ARM, n))
    return {tuple(sorted(m)) for m in out}


DROPPED = {
    "Standing": {tuple(sorted(m)) for m in [(F, H, A), (F, A, A)]},
    "Kneeling": {tuple(sorted(m)) for m in [(K, F, H, A), (K, F, A, A)]},
}


def _rule_specs(category):
    legs_options = [(F,), (F, F)] if category == "Standing" else [(K, K), (K, F)]
    specs = {
        tuple(sorted(legs + arms))
        for legs in legs_options
        for arms in _arm_multisets()
    }
    return specs - DROPPED[category]


def _key(legs, arms):
    return tuple(sorted(legs + arms))


def _one_change(a, b):
    from collections import Counter

    limb = {F: "Leg", K: "Leg", H: "Arm", P: "Arm", A: "Arm"}
    ca, cb = Counter(a), Counter(b)
    x, y = list((ca - cb).elements()), list((cb - ca).elements())
    if sorted((len(x), len(y))) == [0, 1]:
        return True
    return len(x) == len(y) == 1 and limb[x[0]] == limb[y[0]]


# canonical order inside a class: legs first, then contact type order
_CONTACT_ORDER = [H, P, A, F, K]


def _supports(legs, arms):
    return [{"limb": "Leg", "contact": c} for c in sorted(legs, key=_CONTACT_ORDER.index)] + [
        {"limb": "Arm", "contact": c} for c in sorted(arms, key=_CONTACT_ORDER.index)
    ]


def build():
    entries = []
    for row, cols in ROWS.items():
        for col, (cat, legs, arms) in enumerate(cols, start=1):
            assert len(legs) + len(arms) == row
            entries.append((f"{row}.{col}", cat, legs, arms))
    for cat in ("Standing", "Kneeling"):
        listed = {_key(l, a) for _, c, l, a in entries if c == cat}
        assert listed == _rule_specs(cat), cat
        assert len(listed) == 18

    classes = []
    for cid, cat, legs, arms in entries:
        nbs = [
            oid for oid, _, ol, oa in entries
            if oid != cid and _one_change(_key(legs, arms), _key(ol, oa))
        ]
        classes.append({
            "id": cid,
            "category": cat,
            "supports": _supports(legs, arms),
            "torso_contact": False,
            "neighbors": nbs,
        })
    for n, (tier, legs, arms) in enumerate(RESTING, start=1):
        classes.append({
            "id": f"r.{n}",
            "category": "Resting",
            "supports": _supports(legs, arms),
            "torso_contact": True,
            "neighbors": [],
            "tier": tier,
        })
    return {"classes": classes}


if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else (
        Path(__file__).resolve().parents[1] / "src" / "supportpose" / "data" / "taxonomy.json"
    )
    out.write_text(json.dumps(build(), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {out}")
