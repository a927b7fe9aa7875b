"""JSON documents for groups, modules, complexes, categories, functors, G-sets and Mackey functors.

Every document is an object with a ``kind`` tag.  Matrices are row-major
nested integer lists and are reduced mod q on load; group-ring elements are
length-|pi| lists indexed by the group's element order.
"""

import json
from typing import Any, Dict

import numpy as np

from .burnside import BurnsideCategory, FiniteGSet, MackeyFunctor
from .eicat import EICategory, FunctorModule, constant, representable
from .eilenberg import GroupSpace
from .errors import InputError, LocalCoeffError
from .fieldlin import FieldMatrix
from .groupring import FiniteGroup, FreeModuleComplex, GroupRingModule

__all__ = ["KINDS", "load", "loads", "from_document", "to_document", "dumps"]

KINDS = ("group", "module", "complex", "eicategory", "functor", "gset", "mackey")


def _need(d, key):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise InputError(f"missing field {key!r}") from None


def _matrix(a, q, shape=None):
    arr = np.mod(np.asarray(a, dtype=np.int64), q)
    if shape is not None:
        if arr.size != shape[0] * shape[1]:
            raise InputError(f"matrix has {arr.size} entries, expected shape {shape}")
        arr = arr.reshape(shape)
    return FieldMatrix(arr, q)


def group_from(d) -> FiniteGroup:
    if isinstance(d, int):
        return FiniteGroup.cyclic(d)
    if "cyclic" in d:
        return FiniteGroup.cyclic(int(d["cyclic"]))
    if "dihedral" in d:
        return FiniteGroup.dihedral(int(d["dihedral"]))
    if "permutations" in d:
        return FiniteGroup.from_permutations(d["permutations"])
    return FiniteGroup(_need(d, "table"), d.get("identity", 0), d.get("names"))


def group_to(g: FiniteGroup) -> Dict[str, Any]:
    return {"kind": "group", "table": g.table.tolist(), "identity": g.identity, "names": list(g.names)}


def module_from(d) -> GroupRingModule:
    g = group_from(_need(d, "group"))
    q = int(_need(d, "q"))
    side = d.get("side", "left")
    preset = d.get("preset")
    if preset == "trivial":
        return GroupRingModule.trivial(g, q, int(d.get("dim", 1)), side)
    if preset == "sign":
        return GroupRingModule.sign(g, q, side)
    if preset == "regular":
        return GroupRingModule.free(g, q, int(d.get("rank", 1)), side)
    if preset is not None:
        raise InputError(f"unknown module preset {preset!r}")
    if "character" in d:
        return GroupRingModule.character(g, q, d["character"], side)
    return GroupRingModule(g, q, [_matrix(a, q) for a in _need(d, "action")], side)


def module_to(m: GroupRingModule) -> Dict[str, Any]:
    return {"kind": "module", "group": group_to(m.group), "q": m.q, "side": m.side,
            "action": [a.array.tolist() for a in m.action]}


def complex_from(d) -> GroupSpace:
    g = group_from(_need(d, "group"))
    q = int(_need(d, "q"))
    ranks = [int(r) for r in _need(d, "ranks")]
    bd = {int(k): np.asarray(v, dtype=np.int64) for k, v in d.get("boundaries", {}).items()}
    c = FreeModuleComplex(g, q, ranks, bd, "right")
    return GroupSpace(g, c, d.get("valid_through"), d.get("name", "space"))


def complex_to(x: GroupSpace) -> Dict[str, Any]:
    c = x.chains
    return {"kind": "complex", "group": group_to(x.group), "q": c.q, "ranks": list(c.ranks),
            "boundaries": {str(k): v.tolist() for k, v in sorted(c.boundaries.items())},
            "valid_through": x.valid_through, "name": x.name}


def eicategory_from(d) -> EICategory:
    from . import models
    preset = d.get("preset")
    if preset == "bgz2":
        return models.fundamental_category_bgz2(int(_need(d, "p")))
    if preset == "orbit":
        return models.orbit_category(group_from(_need(d, "group")))
    if preset == "group":
        return EICategory.from_group(group_from(_need(d, "group")))
    if preset is not None:
        raise InputError(f"unknown category preset {preset!r}")
    return EICategory(_need(d, "objects"), [tuple(m) for m in _need(d, "morphisms")],
                      _need(d, "composition"), _need(d, "identities"), d.get("names"))


def eicategory_to(c: EICategory) -> Dict[str, Any]:
    return {"kind": "eicategory", "objects": list(c.objects),
            "morphisms": [[int(s), int(t)] for s, t in zip(c.sources, c.targets)],
            "composition": c.comp.tolist(), "identities": list(c.identities), "names": list(c.names)}


def functor_from(d) -> FunctorModule:
    from . import models
    cat = eicategory_from(_need(d, "category"))
    q = int(_need(d, "q"))
    variance = d.get("variance", "covariant")
    preset = d.get("preset")
    if preset == "constant":
        return constant(cat, q, variance, int(d.get("dim", 1)))
    if preset == "representable":
        return representable(cat, d.get("object", 0), q, variance)
    if preset == "serre":
        p = int(_need(_need(d, "category"), "p"))
        return models.serre_coefficient_bgz2(p, q, _need(d, "labels"))
    if preset is not None:
        raise InputError(f"unknown functor preset {preset!r}")
    maps = _need(d, "maps")
    return FunctorModule(cat, q, _need(d, "dims"), [np.mod(np.asarray(m, dtype=np.int64), q) for m in maps], variance)


def functor_to(f: FunctorModule) -> Dict[str, Any]:
    return {"kind": "functor", "category": eicategory_to(f.cat), "q": f.q, "variance": f.variance,
            "dims": list(f.dims), "maps": [m.array.tolist() for m in f.maps]}


def gset_from(d) -> FiniteGSet:
    g = group_from(_need(d, "group"))
    if "orbit" in d:
        return FiniteGSet.orbit(g, frozenset(int(x) for x in d["orbit"]))
    return FiniteGSet(g, _need(d, "perms"))


def gset_to(s: FiniteGSet) -> Dict[str, Any]:
    return {"kind": "gset", "group": group_to(s.group), "perms": s.perms.tolist()}


def _span_key(d):
    return (tuple(sorted(int(x) for x in _need(d, "stabilizer"))), int(_need(d, "left")), int(_need(d, "right")))


def mackey_from(d, cat: BurnsideCategory = None) -> MackeyFunctor:
    g = group_from(_need(d, "group"))
    if cat is None or cat.group != g:
        cat = BurnsideCategory(g)
    q = int(_need(d, "q"))
    preset = d.get("preset")
    if preset == "burnside":
        return MackeyFunctor.burnside(cat, q)
    if preset == "representable":
        return MackeyFunctor.representable(cat, int(_need(d, "orbit")), q)
    if preset == "zero":
        return MackeyFunctor.zero(cat, q)
    if preset is not None:
        raise InputError(f"unknown Mackey preset {preset!r}")
    dims = [int(x) for x in _need(d, "dims")]
    maps = {}
    for e in _need(d, "maps"):
        i, j = int(_need(e, "source")), int(_need(e, "target"))
        maps[(i, j, _span_key(_need(e, "span")))] = _matrix(_need(e, "matrix"), q, (dims[i], dims[j]))
    unknown = [k for k in maps if k not in {(i, j, s) for i in range(cat.n_orbits)
                                             for j in range(cat.n_orbits) for s in cat.basis(i, j)}]
    if unknown:
        raise InputError(f"span {unknown[0]} is not a canonical basis span")
    return MackeyFunctor(cat, q, dims, maps)


def mackey_to(m: MackeyFunctor) -> Dict[str, Any]:
    maps = [{"source": i, "target": j, "span": {"stabilizer": list(k[0]), "left": k[1], "right": k[2]},
             "matrix": a.array.tolist()} for (i, j, k), a in sorted(m.maps.items())]
    return {"kind": "mackey", "group": group_to(m.cat.group), "q": m.q, "dims": list(m.dims), "maps": maps}


_READERS = {"group": group_from, "module": module_from, "complex": complex_from, "eicategory": eicategory_from,
            "functor": functor_from, "gset": gset_from, "mackey": mackey_from}


def from_document(d):
    kind = _need(d, "kind")
    if kind not in _READERS:
        raise InputError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")
    try:
        return _READERS[kind](d)
    except LocalCoeffError:
        raise
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise InputError(f"malformed {kind} document: {e}") from None


def to_document(obj) -> Dict[str, Any]:
    for cls, fn in ((FiniteGroup, group_to), (GroupRingModule, module_to), (GroupSpace, complex_to),
                    (EICategory, eicategory_to), (FunctorModule, functor_to), (FiniteGSet, gset_to),
                    (MackeyFunctor, mackey_to)):
        if isinstance(obj, cls):
            return fn(obj)
    raise InputError(f"no document form for {type(obj).__name__}")


def loads(text: str):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"invalid JSON: {e}") from None
    return from_document(d)


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def dumps(obj) -> str:
    return json.dumps(to_document(obj), sort_keys=True)
