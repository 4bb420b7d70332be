"""The JSON interchange format for categories, morphisms, and map data.

A category file carries objects, hom-space generators, operation term
tables (inputs in boundary order: the first listed input composes
first), optional unit chains, optional coproduct-type morphisms
(diagonal bimodule to a Yoneda tensor bimodule), and optional open/
closed map data for the consistency checker.  The schema below is the
published contract; generator references are [source, target, name]
triples.  Everything the schema cannot express (referential integrity,
composability, degree rules) is checked structurally right after
validation and reported with JSON-pointer-style paths.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

import jsonschema

from .core import RING_F2, RING_Z, AinfCategory, Gen, NonComposable

FORMAT_TAG = "ainfcat-category/1"
CERT_TAG = "ainfcat-certificate/1"

_GEN_REF = {
    "type": "array",
    "minItems": 3,
    "maxItems": 3,
    "prefixItems": [{"type": "string"}, {"type": "string"}, {"type": "string"}],
}

_CHAIN = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["generator", "coefficient"],
        "properties": {"generator": _GEN_REF, "coefficient": {"type": "integer"}},
        "additionalProperties": False,
    },
}

CATEGORY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "ring", "objects", "hom"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": FORMAT_TAG},
        "ring": {"enum": [RING_Z, RING_F2]},
        "objects": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "hom": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["source", "target", "generators"],
                "additionalProperties": False,
                "properties": {
                    "source": {"type": "string"},
                    "target": {"type": "string"},
                    "generators": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["name", "degree"],
                            "additionalProperties": False,
                            "properties": {"name": {"type": "string"}, "degree": {"type": "integer"}},
                        },
                    },
                },
            },
        },
        "operations": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["arity", "terms"],
                "additionalProperties": False,
                "properties": {
                    "arity": {"type": "integer", "minimum": 1},
                    "terms": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["inputs", "output", "coefficient"],
                            "additionalProperties": False,
                            "properties": {
                                "inputs": {"type": "array", "items": _GEN_REF},
                                "output": _GEN_REF,
                                "coefficient": {"type": "integer"},
                            },
                        },
                    },
                },
            },
        },
        "units": {"type": "object", "additionalProperties": _CHAIN},
        "morphisms": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "base_object", "degree", "components"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "base_object": {"type": "string"},
                    "degree": {"type": "integer"},
                    "components": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["left_inputs", "right_inputs", "inputs", "output_left", "output_right", "coefficient"],
                            "additionalProperties": False,
                            "properties": {
                                "left_inputs": {"type": "integer", "minimum": 0},
                                "right_inputs": {"type": "integer", "minimum": 0},
                                "inputs": {"type": "array", "items": _GEN_REF},
                                "output_left": _GEN_REF,
                                "output_right": _GEN_REF,
                                "coefficient": {"type": "integer"},
                            },
                        },
                    },
                },
            },
        },
        "cardy": {
            "type": "object",
            "required": ["morphism", "degree"],
            "additionalProperties": False,
            "properties": {
                "morphism": {"type": "string"},
                "degree": {"type": "integer"},
                "closed_complex": {
                    "type": "object",
                    "required": ["basis", "differential"],
                    "additionalProperties": False,
                    "properties": {
                        "basis": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["name", "degree"],
                                "additionalProperties": False,
                                "properties": {"name": {"type": "string"}, "degree": {"type": "integer"}},
                            },
                        },
                        "differential": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["input", "output", "coefficient"],
                                "additionalProperties": False,
                                "properties": {
                                    "input": {"type": "string"},
                                    "output": {"type": "string"},
                                    "coefficient": {"type": "integer"},
                                },
                            },
                        },
                    },
                },
                "chain_maps": {
                    "type": "object",
                    "additionalProperties": False,
                    "properties": {
                        "oc": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["word", "output", "coefficient"],
                                "additionalProperties": False,
                                "properties": {
                                    "word": {"type": "array", "items": _GEN_REF},
                                    "output": {"type": "string"},
                                    "coefficient": {"type": "integer"},
                                },
                            },
                        },
                        "co": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["input", "output", "coefficient"],
                                "additionalProperties": False,
                                "properties": {
                                    "input": {"type": "string"},
                                    "output": _GEN_REF,
                                    "coefficient": {"type": "integer"},
                                },
                            },
                        },
                        "homotopy": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["word", "output", "coefficient"],
                                "additionalProperties": False,
                                "properties": {
                                    "word": {"type": "array", "items": _GEN_REF},
                                    "output": _GEN_REF,
                                    "coefficient": {"type": "integer"},
                                },
                            },
                        },
                    },
                },
            },
        },
    },
}

CERTIFICATE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["format", "verdict", "object", "subcategory", "max_length", "tau", "h"],
    "additionalProperties": False,
    "properties": {
        "format": {"const": CERT_TAG},
        "verdict": {"enum": ["generated", "inconclusive", "refuted-at-bound"]},
        "object": {"type": "string"},
        "subcategory": {"type": "array", "items": {"type": "string"}},
        "max_length": {"type": "integer", "minimum": 0},
        "category_digest": {"type": "string"},
        "rational_only": {"type": "boolean"},
        "detail": {"type": "string"},
        "tau": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["q", "letters", "p", "coefficient"],
                "additionalProperties": False,
                "properties": {
                    "q": _GEN_REF,
                    "letters": {"type": "array", "items": _GEN_REF},
                    "p": _GEN_REF,
                    "coefficient": {"type": "integer"},
                },
            },
        },
        "h": _CHAIN,
    },
}


class InputError(Exception):
    """Schema or referential failure in an input file (exit code 2)."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


@dataclass
class LoadedFile:
    category: AinfCategory
    raw: dict
    digest: str


def file_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _schema_check(instance, schema):
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(err.message, path=path)


def _resolve(refs_index, ref, path):
    key = tuple(ref)
    g = refs_index.get(key)
    if g is None:
        raise InputError(f"reference to undeclared generator {ref}", path=path)
    return g


def load_category(data: bytes) -> LoadedFile:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise InputError(f"not valid JSON: {err}")
    _schema_check(raw, CATEGORY_SCHEMA)

    objects = list(raw["objects"])
    if len(set(objects)) != len(objects):
        raise InputError("duplicate object names", path="/objects")
    obj_set = set(objects)

    hom: dict[tuple[str, str], list[Gen]] = {}
    refs_index: dict[tuple, Gen] = {}
    for i, entry in enumerate(raw["hom"]):
        s, t = entry["source"], entry["target"]
        if s not in obj_set or t not in obj_set:
            raise InputError(f"hom space between undeclared objects ({s}, {t})", path=f"/hom/{i}")
        gens = []
        for j, gd in enumerate(entry["generators"]):
            g = Gen(s, t, gd["name"], gd["degree"])
            if (s, t, g.name) in refs_index:
                raise InputError(f"duplicate generator {g.name} in hom({s},{t})", path=f"/hom/{i}/generators/{j}")
            refs_index[(s, t, g.name)] = g
            gens.append(g)
        hom.setdefault((s, t), []).extend(gens)

    mu: dict[int, dict] = {}
    for i, op in enumerate(raw.get("operations", [])):
        d = op["arity"]
        table = mu.setdefault(d, {})
        for j, term in enumerate(op["terms"]):
            path = f"/operations/{i}/terms/{j}"
            if len(term["inputs"]) != d:
                raise InputError(f"term has {len(term['inputs'])} inputs for arity {d}", path=path)
            key = tuple(_resolve(refs_index, r, path) for r in term["inputs"])
            out = _resolve(refs_index, term["output"], path)
            if term["coefficient"] == 0:
                raise InputError("zero coefficient stored", path=path)
            table.setdefault(key, {})
            table[key][out] = table[key].get(out, 0) + term["coefficient"]
    for d in list(mu):
        mu[d] = {k: {g: c for g, c in v.items() if c} for k, v in mu[d].items()}
        mu[d] = {k: v for k, v in mu[d].items() if v}
        if not mu[d]:
            del mu[d]

    units = {}
    for obj, chain in raw.get("units", {}).items():
        if obj not in obj_set:
            raise InputError(f"unit for undeclared object {obj}", path="/units")
        units[obj] = {
            _resolve(refs_index, t["generator"], f"/units/{obj}"): t["coefficient"] for t in chain
        }

    try:
        cat = AinfCategory(objects=objects, hom=hom, mu=mu, ring=raw["ring"], units=units)
    except (ValueError, NonComposable) as err:
        raise InputError(str(err), path="/operations")
    return LoadedFile(category=cat, raw=raw, digest=file_digest(data))


def load_morphism(loaded: LoadedFile, name: str):
    """Instantiate a named coproduct-type morphism from the file."""
    from .bimodules import LEFT, RIGHT, BimoduleHom, PairGen, diagonal_bimodule, tensor_bimodule, yoneda_module

    cat = loaded.category
    refs_index = {(g.source, g.target, g.name): g for g in cat.generators()}
    for i, m in enumerate(loaded.raw.get("morphisms", [])):
        if m["name"] != name:
            continue
        K = m["base_object"]
        if K not in set(cat.objects):
            raise InputError(f"morphism base object {K} not declared", path=f"/morphisms/{i}")
        source = diagonal_bimodule(cat)
        target = tensor_bimodule(yoneda_module(cat, K, LEFT), yoneda_module(cat, K, RIGHT))
        comps: dict = {}
        for j, c in enumerate(m["components"]):
            path = f"/morphisms/{i}/components/{j}"
            r, s = c["left_inputs"], c["right_inputs"]
            if len(c["inputs"]) != r + s + 1:
                raise InputError("component input count does not match (r, s)", path=path)
            key = tuple(_resolve(refs_index, ref, path) for ref in c["inputs"])
            pg = PairGen(_resolve(refs_index, c["output_left"], path), _resolve(refs_index, c["output_right"], path))
            comps.setdefault((r, s), {}).setdefault(key, {})[pg] = c["coefficient"]
        try:
            return BimoduleHom(source=source, target=target, n=m["degree"], components=comps)
        except ValueError as err:
            raise InputError(str(err), path=f"/morphisms/{i}")
    raise InputError(f"no morphism named {name} in file", path="/morphisms")


# ---------------------------------------------------------------------------
# writers


def _gen_ref(g: Gen) -> list:
    return [g.source, g.target, g.name]


def category_to_json(cat: AinfCategory, morphism_tables=None) -> dict:
    out = {
        "format": FORMAT_TAG,
        "ring": cat.ring,
        "objects": sorted(cat.objects),
        "hom": [
            {
                "source": s,
                "target": t,
                "generators": [{"name": g.name, "degree": g.degree} for g in sorted(cat.hom[(s, t)])],
            }
            for (s, t) in sorted(cat.hom)
        ],
        "operations": [],
    }
    for d in sorted(cat.mu):
        terms = []
        for key in sorted(cat.mu[d]):
            for g in sorted(cat.mu[d][key]):
                terms.append(
                    {
                        "inputs": [_gen_ref(x) for x in key],
                        "output": _gen_ref(g),
                        "coefficient": cat.mu[d][key][g],
                    }
                )
        out["operations"].append({"arity": d, "terms": terms})
    if cat.units:
        out["units"] = {
            obj: [
                {"generator": _gen_ref(g), "coefficient": c}
                for g, c in sorted(cat.units[obj].items())
            ]
            for obj in sorted(cat.units)
        }
    if morphism_tables:
        out["morphisms"] = morphism_tables
    return out


def morphism_to_json(name: str, K: str, phi) -> dict:
    comps = []
    for (r, s) in sorted(phi.components):
        for key in sorted(phi.components[(r, s)], key=str):
            for pg, c in sorted(phi.components[(r, s)][key].items(), key=str):
                comps.append(
                    {
                        "left_inputs": r,
                        "right_inputs": s,
                        "inputs": [_gen_ref(x) for x in key],
                        "output_left": _gen_ref(pg.p),
                        "output_right": _gen_ref(pg.q),
                        "coefficient": c,
                    }
                )
    return {"name": name, "base_object": K, "degree": phi.n, "components": comps}


def certificate_to_json(cert, digest: str) -> dict:
    return {
        "format": CERT_TAG,
        "verdict": cert.verdict,
        "object": cert.K,
        "subcategory": sorted(cert.B_objects),
        "max_length": cert.max_length,
        "category_digest": digest,
        "rational_only": cert.rational_only,
        "detail": cert.detail,
        "tau": [
            {
                "q": _gen_ref(w.q),
                "letters": [_gen_ref(a) for a in w.mid],
                "p": _gen_ref(w.p),
                "coefficient": c,
            }
            for w, c in sorted(cert.tau.items(), key=lambda item: str(item[0]))
        ],
        "h": [
            {"generator": _gen_ref(g), "coefficient": c}
            for g, c in sorted(cert.h.items())
        ],
    }


def load_certificate(data: bytes, cat: AinfCategory):
    from .bimodules import TensorWord
    from .generation import GenerationCertificate

    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise InputError(f"not valid JSON: {err}")
    _schema_check(raw, CERTIFICATE_SCHEMA)
    refs_index = {(g.source, g.target, g.name): g for g in cat.generators()}
    tau = {}
    for i, t in enumerate(raw["tau"]):
        path = f"/tau/{i}"
        w = TensorWord(
            _resolve(refs_index, t["q"], path),
            tuple(_resolve(refs_index, a, path) for a in t["letters"]),
            _resolve(refs_index, t["p"], path),
        )
        tau[w] = t["coefficient"]
    h = {_resolve(refs_index, t["generator"], "/h"): t["coefficient"] for t in raw["h"]}
    return GenerationCertificate(
        verdict=raw["verdict"],
        K=raw["object"],
        B_objects=list(raw["subcategory"]),
        max_length=raw["max_length"],
        tau=tau,
        h=h,
        rational_only=raw.get("rational_only", False),
        detail=raw.get("detail", ""),
    )
