"""JSON serialization for semigroups, congruences, sections, algebras, actions.

Exact scalars round-trip as fraction strings; float scalars as [re, im]
number pairs.  Loaders validate deeply by default and raise InputError with
a message suitable for CLI exit code 2.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .congruence import Congruence
from .errors import InputError
from .fdalgebra import BasisIdeal, FdStarAlgebra, PartialStarAutomorphism
from .partial_bijection import parse_pb
from .scalars import EXACT, GaussianRational, float_scalars
from .semigroup import FiniteInverseSemigroup, generate_partial_bijections, verify_inverse_semigroup


def load_json_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def dump_json_file(obj, path):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=False)
        fh.write("\n")


# -- scalars -------------------------------------------------------------------


def encode_scalar(x, scalars):
    if scalars.exact:
        return [str(x.re), str(x.im)]
    c = complex(x)
    return [c.real, c.imag]


def decode_scalar(obj, scalars):
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise InputError(f"scalar must be a [re, im] pair, got {obj!r}")
    re, im = obj
    if scalars.exact:
        return GaussianRational(Fraction(str(re)), Fraction(str(im)))
    return complex(float(re), float(im))


def encode_vector(vec, scalars):
    return [encode_scalar(c, scalars) for c in vec]


def decode_vector(obj, scalars, dim):
    if len(obj) != dim:
        raise InputError(f"vector of length {len(obj)}, expected {dim}")
    return tuple(decode_scalar(c, scalars) for c in obj)


# -- semigroups ------------------------------------------------------------------


def dump_semigroup(S):
    out = {
        "type": "cayley",
        "size": S.size,
        "product": [list(row) for row in S.product],
        "star": list(S.star),
    }
    if S.unit is not None:
        out["unit"] = S.unit
    if S.zero is not None:
        out["zero"] = S.zero
    if S.labels is not None:
        out["labels"] = list(S.labels)
    if S.words is not None:
        out["words"] = [[[g, bool(st)] for (g, st) in w] for w in S.words]
    return out


def load_semigroup(obj, validate=True, max_size=100000):
    if isinstance(obj, str):
        obj = load_json_file(obj)
    kind = obj.get("type")
    if kind == "cayley":
        try:
            S = FiniteInverseSemigroup(
                obj["product"],
                obj["star"],
                unit=obj.get("unit"),
                zero=obj.get("zero"),
                labels=obj.get("labels"),
            )
        except KeyError as exc:
            raise InputError(f"cayley semigroup JSON missing field {exc}") from exc
        if S.unit is None:
            S.unit = S.find_unit()
        if S.zero is None:
            S.zero = S.find_zero()
    elif kind == "partial_bijections":
        try:
            degree = int(obj["degree"])
            raw = obj["generators"]
        except KeyError as exc:
            raise InputError(f"partial bijection JSON missing field {exc}") from exc
        gens = []
        for g in raw:
            if isinstance(g, str):
                gens.append(parse_pb(g))
            else:
                gens.append(parse_pb("(" + ",".join(str(int(x)) for x in g) + ")"))
        if any(g.degree != degree for g in gens):
            raise InputError("generator degree disagrees with the declared degree")
        S = generate_partial_bijections(gens, cap=max_size)
    else:
        raise InputError(f"unknown semigroup type {kind!r}")
    if validate:
        rep = verify_inverse_semigroup(S)
        if not rep.passed:
            raise InputError(
                "table is not an inverse semigroup: "
                + "; ".join(c.name for c in rep.failures())
            )
    return S


# -- partitions, subsets, sections ----------------------------------------------


def dump_congruence(cong):
    return [list(cls) for cls in cong.classes]


def load_congruence(obj, S):
    if isinstance(obj, str):
        obj = load_json_file(obj)
    if not isinstance(obj, list):
        raise InputError("congruence JSON must be an array of arrays")
    return Congruence(S.size, obj)


def load_subset(obj, S):
    if isinstance(obj, str):
        obj = load_json_file(obj)
    if isinstance(obj, dict) and "subset" in obj:
        obj = obj["subset"]
    if not isinstance(obj, list):
        raise InputError("subset JSON must be an array of element indices")
    subset = sorted(set(int(x) for x in obj))
    for x in subset:
        if not 0 <= x < S.size:
            raise InputError(f"subset member {x} out of range")
    return tuple(subset)


def dump_section(section):
    return {str(k): v for k, v in sorted(section.items())}


def load_section(obj):
    if isinstance(obj, str):
        obj = load_json_file(obj)
    if not isinstance(obj, dict):
        raise InputError("section JSON must be an object mapping class to element")
    try:
        return {int(k): int(v) for k, v in obj.items()}
    except ValueError as exc:
        raise InputError(f"section keys and values must be integers: {exc}") from exc


# -- algebras --------------------------------------------------------------------


def dump_algebra(A):
    triplets = []
    for i in range(A.dim):
        for j in range(A.dim):
            for k, c in A.mul_basis(i, j):
                triplets.append([i, j, k, encode_scalar(c, A.scalars)])
    star = []
    for i in range(A.dim):
        star.append([[k, encode_scalar(c, A.scalars)] for k, c in A._star[i]])
    return {
        "dim": A.dim,
        "labels": list(A.labels),
        "scalars": "exact" if A.scalars.exact else "float",
        "tol": getattr(A.scalars, "tol", 0.0),
        "structure": triplets,
        "star": star,
    }


def load_algebra(obj):
    if isinstance(obj, str):
        obj = load_json_file(obj)
    dim = int(obj["dim"])
    sc = EXACT if obj.get("scalars", "exact") == "exact" else float_scalars(
        float(obj.get("tol") or 1e-9)
    )
    mul = [[[] for _ in range(dim)] for _ in range(dim)]
    for i, j, k, c in obj["structure"]:
        mul[int(i)][int(j)].append((int(k), decode_scalar(c, sc)))
    star = []
    for entries in obj["star"]:
        star.append([(int(k), decode_scalar(c, sc)) for k, c in entries])
    return FdStarAlgebra(dim, mul, star, labels=obj.get("labels"), scalars=sc)


# -- actions ---------------------------------------------------------------------


def dump_action(action):
    from .actions import BusbySmithAction, GreenTwistedAction, TwistedPartialAction

    A = action.algebra
    if isinstance(action, BusbySmithAction):
        kind, S = "busby", action.semigroup
    elif isinstance(action, GreenTwistedAction):
        kind, S = "green", action.semigroup
    elif isinstance(action, TwistedPartialAction):
        kind, S = "partial", action.group
    else:
        raise InputError(f"cannot serialize {type(action).__name__}")
    out = {
        "kind": kind,
        "algebra": dump_algebra(A),
        "semigroup": dump_semigroup(S),
        "ideals": [list(ideal.indices) for ideal in action.ideals],
        "maps": [
            [encode_vector(img, A.scalars) for img in auto.images]
            for auto in action.autos
        ],
    }
    if kind in ("busby", "partial"):
        out["cocycle"] = [
            [encode_vector(w.coords, A.scalars) for w in row] for row in action.cocycle
        ]
    if kind == "green":
        out["normal"] = list(action.normal)
        out["twist"] = {
            str(n): encode_vector(action.twist[n].coords, A.scalars)
            for n in action.normal
        }
    return out


def load_action(obj):
    from .actions import BusbySmithAction, GreenTwistedAction, TwistedPartialAction

    if isinstance(obj, str):
        obj = load_json_file(obj)
    kind = obj.get("kind")
    A = load_algebra(obj["algebra"])
    S = load_semigroup(obj["semigroup"])
    ideals = [BasisIdeal(A, idx) for idx in obj["ideals"]]
    autos = []
    for s, images in enumerate(obj["maps"]):
        dom = ideals[S.inv(s)]
        decoded = [decode_vector(v, A.scalars, A.dim) for v in images]
        autos.append(PartialStarAutomorphism(dom, ideals[s], decoded))
    if kind == "busby":
        cocycle = [
            [A.element(decode_vector(v, A.scalars, A.dim)) for v in row]
            for row in obj["cocycle"]
        ]
        return BusbySmithAction(A, S, ideals, autos, cocycle)
    if kind == "partial":
        cocycle = [
            [A.element(decode_vector(v, A.scalars, A.dim)) for v in row]
            for row in obj["cocycle"]
        ]
        return TwistedPartialAction(A, S, ideals, autos, cocycle)
    if kind == "green":
        normal = [int(n) for n in obj["normal"]]
        twist = {
            int(n): A.element(decode_vector(v, A.scalars, A.dim))
            for n, v in obj["twist"].items()
        }
        return GreenTwistedAction(A, S, normal, ideals, autos, twist)
    raise InputError(f"unknown action kind {kind!r}")
