"""Exact thick-set arithmetic, tree construction, and hull codes.

Thin convenience layer over the compiled ``_core`` module: functions that
return JSON text in C++ are decoded to Python dicts/lists here.
"""

import json

from . import _core

__all__ = [
    "run_cli",
    "xi",
    "thick_member",
    "marker",
    "canonical",
    "path_code",
    "path_decode",
    "family_of_path",
    "tree_child",
    "eval_coordinate",
    "certificate",
    "lemma1_fuzz",
    "r_and_l",
    "hull_eval",
    "hull_distinguish",
    "tf_add",
    "tf_scale",
    "tf_sign",
    "tf_abs_ge",
]


def run_cli(args):
    """Run the command-line surface; returns (exit_status, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])


def xi(m):
    return json.loads(_core.xi_json(m))


def thick_member(j, probe):
    return _core.thick_member(j, str(probe))


def marker(j, n):
    return json.loads(_core.marker_json(j, n))


def canonical(j, n):
    return json.loads(_core.canonical_json(j, n))


def path_code(path):
    return int(_core.path_code(list(path)))


def path_decode(code):
    return _core.path_decode(str(code))


def family_of_path(path):
    return int(_core.family_of_path(list(path)))


def tree_child(parent, i):
    return json.loads(_core.tree_child_json(list(parent), i))


def eval_coordinate(stem, k):
    return json.loads(_core.eval_json(list(stem), k))


def certificate(parent, i, i2):
    return json.loads(_core.certificate_json(list(parent), i, i2))


def lemma1_fuzz(trials, m_max, a_max, seed):
    """Returns (report_lines, failures) with each line decoded from JSON."""
    report, failures = _core.lemma1_fuzz(trials, m_max, a_max, seed)
    lines = [json.loads(line) for line in report.splitlines() if line]
    return lines, failures


def r_and_l(stems):
    r, l = _core.r_and_l([list(s) for s in stems])
    return int(r), int(l)


def hull_eval(code, k):
    return json.loads(_core.hull_eval_json(json.dumps(code), k))


def hull_distinguish(a, b, m_max=3, horizon=500):
    return json.loads(
        _core.hull_distinguish_json(json.dumps(a), json.dumps(b), m_max, horizon)
    )


def tf_add(x, y):
    return json.loads(_core.tf_add_json(json.dumps(x), json.dumps(y)))


def tf_scale(q, x):
    return json.loads(_core.tf_scale_json(str(q), json.dumps(x)))


def tf_sign(x):
    return _core.tf_sign(json.dumps(x))


def tf_abs_ge(x, bound):
    return _core.tf_abs_ge(json.dumps(x), str(bound))
