"""JSON schemas of the reports printed by ``bansync --json``."""
from __future__ import annotations

BITS = {"type": "string", "pattern": "^[01]+$"}
_TRANS = {
    "type": "object",
    "required": ["from", "to"],
    "properties": {"from": BITS, "to": BITS},
}
_ATTS = {"type": "array", "items": {"type": "array", "items": BITS}}

ANALYZE = {
    "type": "object",
    "required": ["n", "name", "functions", "arcs", "monotone", "instabilities"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "name": {"type": "string"},
        "functions": {"type": "array", "items": {"type": "string"}},
        "arcs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "sign"],
                "properties": {
                    "from": {"type": "integer"},
                    "to": {"type": "integer"},
                    "sign": {"enum": [-1, 0, 1]},
                },
            },
        },
        "monotone": {"type": "boolean"},
        "nonmonotone_arcs": {"type": "array"},
        "instabilities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["config", "unstable"],
                "properties": {"config": BITS, "unstable": {"type": "array", "items": {"type": "integer"}}},
            },
        },
    },
}

GRAPH = {
    "type": "object",
    "required": ["n", "variant", "attractors", "transient_count", "edges_count"],
    "properties": {
        "n": {"type": "integer"},
        "variant": {"enum": ["sig", "eig", "augmented"]},
        "added": {"anyOf": [{"type": "null"}, _TRANS]},
        "attractors": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["configs", "kind"],
                "properties": {
                    "configs": {"type": "array", "items": BITS, "minItems": 1},
                    "kind": {"enum": ["stable", "unstable"]},
                },
            },
        },
        "transient_count": {"type": "integer", "minimum": 0},
        "edges_count": {"type": "integer", "minimum": 0},
    },
}

CYCLE = {
    "type": "object",
    "required": ["nodes", "arcs", "length", "sign", "witness"],
    "properties": {
        "nodes": {"type": "array", "items": {"type": "integer"}},
        "arcs": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}, "minItems": 2, "maxItems": 2}},
        "length": {"type": "integer", "minimum": 1},
        "sign": {"enum": [-1, 1]},
        "witness": BITS,
    },
}
CYCLES = {"type": "array", "items": CYCLE}

VERDICT = {
    "type": "object",
    "required": ["from", "to", "size", "verdict", "totally"],
    "properties": {
        "from": BITS,
        "to": BITS,
        "size": {"type": "integer", "minimum": 2},
        "verdict": {"enum": ["sequentialisable", "normal"]},
        "totally": {"type": "boolean"},
        "witness": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "to", "size"],
                "properties": {"from": BITS, "to": BITS, "size": {"type": "integer"}},
            },
        },
    },
}
VERDICTS = {"type": "array", "items": VERDICT}

IMPACT = {
    "type": "object",
    "required": ["from", "to", "label", "x_recurrent", "y_recurrent", "Aa_x", "Aa_y", "destroyed", "grown"],
    "properties": {
        "from": BITS,
        "to": BITS,
        "label": {"enum": ["none", "F", "G", "D", "extended"]},
        "x_recurrent": {"type": "boolean"},
        "y_recurrent": {"type": "boolean"},
        "Aa_x": _ATTS,
        "Aa_y": _ATTS,
        "destroyed": _ATTS,
        "grown": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["from", "into"],
                "properties": {"from": {"type": "array", "items": BITS}, "into": {"type": "array", "items": BITS}},
            },
        },
        "detail": {"type": "string"},
    },
}

SENSITIVITY = {
    "type": "object",
    "required": ["sensitivities", "very_sensitive", "normal_count", "per_label", "merge_pairs", "witnesses"],
    "properties": {
        "sensitivities": {"type": "array", "items": {"enum": ["F", "G", "D", "M"]}},
        "very_sensitive": {"type": "boolean"},
        "normal_count": {"type": "integer", "minimum": 0},
        "per_label": {"type": "object", "additionalProperties": {"type": "integer"}},
        "merge_pairs": {"type": "array", "items": {"type": "array", "items": _TRANS, "minItems": 2, "maxItems": 2}},
        "witnesses": {"type": "object", "additionalProperties": {"type": "array", "items": _TRANS}},
    },
}

LEDGER = {
    "type": "object",
    "required": ["domain", "seed", "networks", "weight", "claims", "counts", "records"],
    "properties": {
        "domain": {"type": "string"},
        "seed": {"type": ["integer", "null"]},
        "networks": {"type": "integer"},
        "weight": {"type": "integer"},
        "claims": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["description", "verdict", "checked", "failures", "witnesses"],
                "properties": {
                    "verdict": {"enum": ["confirmed", "inconclusive", "refuted", "flagged"]},
                    "checked": {"type": "integer"},
                    "failures": {"type": "integer"},
                    "witnesses": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["tables", "n", "detail", "network"],
                        },
                    },
                },
            },
        },
        "counts": {"type": "object", "additionalProperties": {"type": "integer"}},
        "records": {"type": "object"},
    },
}

BY_COMMAND = {
    "analyze": ANALYZE,
    "attractors": GRAPH,
    "critical-cycles": CYCLES,
    "normal": VERDICTS,
    "impact": IMPACT,
    "sensitivity": SENSITIVITY,
    "verify": LEDGER,
}
