"""JSON schemas of the CLI outputs (draft 2020-12)."""

_num = {"type": ["number", "null"]}
_int = {"type": "integer"}
_simplex = {"type": "array", "items": _int}

THICKNESS_REPORT = {
    "type": "object",
    "required": ["schema_version", "gg_thickness", "witness", "min_link_thickness",
                 "edge_min", "edge_max", "enclosing_radius", "valid"],
    "properties": {
        "schema_version": {"const": 1},
        "gg_thickness": _num,
        "witness": {"type": ["array", "null"], "items": _simplex},
        "min_link_thickness": _num,
        "link_witness": {"type": ["object", "null"]},
        "edge_min": _num,
        "edge_max": _num,
        "enclosing_radius": {"type": "number"},
        "valid": {"type": "boolean"},
    },
}

PIPELINE_RESULT = {
    "type": "object",
    "required": ["schema_version", "params", "conditions", "report_pre", "report_post",
                 "report_final", "scale", "radius_pre", "radius_final", "crossings", "subdivision"],
    "properties": {
        "schema_version": {"const": 1},
        "params": {"type": "object", "required": ["V", "n", "seed", "alpha0_final", "t_subdiv", "tau"]},
        "conditions": {"type": "object", "required": ["cond1_ok", "cond2_ok", "dagger_ratio", "edge_ratio"]},
        "scale": {"type": "number"},
        "radius_pre": {"type": "number"},
        "radius_final": {"type": "number"},
        "crossings": {"type": ["object", "null"]},
        "subdivision": {"type": "object", "required": ["t", "child_vertices"]},
    },
}

SUBDIVISION_MAP = {
    "type": "object",
    "required": ["schema_version", "t", "parent", "vertices", "top_simplices"],
    "properties": {
        "schema_version": {"const": 1},
        "t": {"type": "integer", "minimum": 1},
        "parent": {"type": "object", "required": ["k", "V", "maximal"]},
        "vertices": {"type": "array", "items": {
            "type": "object", "required": ["parent_simplex", "numerators"]}},
        "top_simplices": {"type": "array"},
    },
}

LINK_REPORT = {
    "type": "object",
    "required": ["schema_version", "simplex", "link_vertices", "link_simplices", "parent",
                 "link_thickness", "upper", "witness"],
    "properties": {
        "schema_version": {"const": 1},
        "simplex": _simplex,
        "link_vertices": _int,
        "link_simplices": {"type": "array", "items": _simplex},
        "link_thickness": _num,
        "upper": _num,
    },
}

NET_RESULT = {
    "type": "object",
    "required": ["schema_version", "epsilon", "centers", "packing_ok", "covering_ok",
                 "packing_witness", "covering_witness"],
    "properties": {
        "schema_version": {"const": 1},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "centers": {"type": "array", "items": _int},
        "packing_ok": {"type": "boolean"},
        "covering_ok": {"type": "boolean"},
    },
}

CROSSING_RESULT = {
    "type": "object",
    "required": ["schema_version", "max_count", "argmax", "per_color_max", "radius", "n_centers"],
    "properties": {
        "schema_version": {"const": 1},
        "max_count": _int,
        "per_color_max": {"type": "array", "items": _int},
        "radius": {"type": "number"},
        "n_centers": _int,
    },
}

STUDY_SUMMARY = {
    "type": "object",
    "required": ["schema_version", "spec", "n", "V_grid", "seeds", "status", "radius_fit",
                 "crossing_fit", "median_R_final", "failures"],
    "properties": {"schema_version": {"const": 1}, "status": {"type": "string"}},
}

ERROR = {
    "type": "object",
    "required": ["error", "message", "exit_code"],
    "properties": {"error": {"type": "string"}, "message": {"type": "string"},
                   "exit_code": {"enum": [1, 2, 3]}, "line": {"type": "integer"}},
}

BY_COMMAND = {
    "embed": PIPELINE_RESULT,
    "certify": THICKNESS_REPORT,
    "subdivide": SUBDIVISION_MAP,
    "link": LINK_REPORT,
    "net": NET_RESULT,
    "crossing": CROSSING_RESULT,
    "scale-study": STUDY_SUMMARY,
}
