"""Command-line front end: single analyses, convergence sweeps and table layouts.

Exit codes: 0 success, 2 configuration, 3 assembly, 4 solver, 5 oracle, 6 I/O.
"""

import argparse
import math
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import BarycentricInterpolator

from . import oracle as orc
from .assembly import AssemblyError
from .diffmat import SCHEMES
from .model import (DEFAULT_E, DEFAULT_I, DEFAULT_L, DEFAULT_M, DEFAULT_Q, LEFT, RIGHT,
                    BeamCase, BeamProperties, Buckling, LengthScales, Static, SupportKind,
                    Vibration, nondimensionalize)
from .solve import IllPosedWarning, SolverError, solve_buckling, solve_modal, solve_static

EXIT_OK, EXIT_CONFIG, EXIT_ASSEMBLY, EXIT_SOLVER, EXIT_ORACLE, EXIT_IO = 0, 2, 3, 4, 5, 6
ANALYSES = ("static", "vibrate", "buckle", "convergence", "table")
TARGETS = ("static", "vibrate", "buckle")
SUPPORTS = tuple(k.value for k in SupportKind)
REFERENCE_N = tuple(range(5, 22, 2))
G_PAIRS = ((0.1, 0.05), (0.15, 0.1))
CSV_DIGITS = 10


class ConfigError(ValueError):
    pass


# ------------------------------------------------------------------ config

_DEFAULTS = {
    "bc": "ss", "g1-ratio": 0.1, "g2-ratio": 0.05, "g1": None, "g2": None,
    "n": 21, "n-list": REFERENCE_N, "modes": 6, "E": DEFAULT_E, "I": DEFAULT_I,
    "m": DEFAULT_M, "L": DEFAULT_L, "q": DEFAULT_Q, "oracle": "auto", "csv": None,
    "table-id": None, "analysis": "static", "scheme": "hermite",
}
_PAIRS = (("g1", "g1-ratio"), ("g2", "g2-ratio"))


def _n_list(text):
    try:
        values = tuple(int(v) for v in str(text).split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"bad N list {text!r}") from None
    if not values:
        raise ConfigError("empty N list")
    return values


def _oracle_flag(text):
    text = str(text).lower()
    if text not in ("on", "off", "auto"):
        raise ConfigError(f"oracle must be on or off, got {text!r}")
    return text


def _choice(options):
    def conv(text):
        if text not in options:
            raise ConfigError(f"{text!r} not in {options}")
        return text
    return conv


def _int_in(lo, hi):
    def conv(text):
        v = int(text)
        if not lo <= v <= hi:
            raise ConfigError(f"value {v} outside {lo}..{hi}")
        return v
    return conv


_CONVERT = {
    "bc": _choice(SUPPORTS), "g1-ratio": float, "g2-ratio": float, "g1": float, "g2": float,
    "n": int, "n-list": _n_list, "modes": int, "E": float, "I": float, "m": float,
    "L": float, "q": float, "oracle": _oracle_flag, "csv": str, "table-id": _int_in(1, 10),
    "analysis": _choice(TARGETS), "scheme": _choice(SCHEMES),
}


def _convert(key, text):
    try:
        return _CONVERT[key](text)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc


def read_config_file(path):
    """Parse `key = value` lines; `#` starts a comment. Keys are long flag names."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (s.strip() for s in line.partition("="))
        key = key.lstrip("-").replace("_", "-")
        if not sep or not key:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        if key not in _CONVERT:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        out[key] = _convert(key, value)
    return out


def _check_pairs(values, source):
    for absolute, ratio in _PAIRS:
        if values.get(absolute) is not None and values.get(ratio) is not None:
            raise ConfigError(f"{source}: --{absolute} and --{ratio} are mutually exclusive")


def _merge(layers):
    """Later layers win; giving either form of a length scale replaces both forms below it."""
    merged = {}
    for layer in layers:
        for pair in _PAIRS:
            if any(layer.get(k) is not None for k in pair):
                for k in pair:
                    merged.pop(k, None)
        merged.update({k: v for k, v in layer.items() if v is not None})
    return merged


@dataclass(frozen=True)
class RunConfig:
    analysis: str
    bc: str = "ss"
    g1: float = 0.1
    g2: float = 0.05
    n: int = 21
    n_list: tuple = REFERENCE_N
    modes: int = 6
    E: float = DEFAULT_E
    I: float = DEFAULT_I
    m: float = DEFAULT_M
    L: float = DEFAULT_L
    q: float = DEFAULT_Q
    oracle: str = "auto"
    csv: str | None = None
    table_id: int | None = None
    target: str = "static"
    scheme: str = "hermite"

    @property
    def props(self):
        return BeamProperties(self.E, self.I, self.m, self.L)

    @property
    def scales(self):
        return LengthScales(self.g1, self.g2)

    def case(self, load, n=None, kind=None, scales=None):
        return BeamCase(kind or self.bc, scales or self.scales, self.props, load,
                        n or self.n, self.scheme)


def build_parser():
    p = argparse.ArgumentParser(prog="sgbeam", description="Second strain gradient beam element.")
    p.add_argument("analysis", choices=ANALYSES)
    p.add_argument("--config", help="file of key = value lines")
    p.add_argument("--bc")
    for name in ("g1-ratio", "g2-ratio", "g1", "g2", "E", "I", "m", "L", "q"):
        p.add_argument(f"--{name}")
    p.add_argument("--n")
    p.add_argument("--n-list", help="comma separated grid sizes")
    p.add_argument("--modes")
    p.add_argument("--oracle", help="on, off or auto (default)")
    p.add_argument("--csv", help="write report rows to this path")
    p.add_argument("--table-id")
    p.add_argument("--analysis", dest="target", help="analysis swept by convergence")
    p.add_argument("--scheme")
    return p


def parse_config(argv):
    """Merge defaults, an optional config file and command-line flags into a RunConfig."""
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code == 0:  # --help
            raise
        raise ConfigError("invalid command line") from exc
    cli = {}
    for key in _CONVERT:
        attr = "target" if key == "analysis" else key.replace("-", "_")
        value = getattr(ns, attr, None)
        if value is not None:
            cli[key] = _convert(key, value)
    _check_pairs(cli, "command line")
    layers = [_DEFAULTS]
    if ns.config:
        from_file = read_config_file(ns.config)
        _check_pairs(from_file, ns.config)
        layers.append(from_file)
    layers.append(cli)
    v = _merge(layers)

    if not v["L"] > 0:
        raise ConfigError("L must be positive")
    g1 = v["g1"] if "g1" in v else v["g1-ratio"] * v["L"]
    g2 = v["g2"] if "g2" in v else v["g2-ratio"] * v["L"]
    if ns.analysis == "table" and v.get("table-id") is None:
        raise ConfigError("table needs --table-id")
    if v["n"] < 5 or any(n < 5 for n in v["n-list"]):
        raise ConfigError("grids need at least 5 points")
    if v["modes"] < 1:
        raise ConfigError("modes must be at least 1")
    try:
        cfg = RunConfig(ns.analysis, v["bc"], g1, g2, v["n"], tuple(sorted(v["n-list"])),
                        v["modes"], v["E"], v["I"], v["m"], v["L"], v["q"], v["oracle"],
                        v.get("csv"), v.get("table-id"), v["analysis"], v["scheme"])
        cfg.props, cfg.scales  # noqa: B018  validate positivity
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if cfg.oracle == "on" and not cfg.scales.oracle_eligible and ns.analysis != "table":
        raise ConfigError("oracle needs g1 > sqrt(2) g2")
    return cfg


# ------------------------------------------------------------------ reports

@dataclass
class Section:
    name: str
    columns: tuple
    rows: list = field(default_factory=list)


def _fmt_csv(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.{CSV_DIGITS}g}"
    return str(v)


def _fmt_display(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "---"
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if v == 0 or abs(v) >= 1e-2:
            return f"{v:.4f}"
        return f"{v:.4e}"
    return str(v)


def emit_csv(section, path):
    """Header plus one line per row, 10 significant digits, LF endings."""
    lines = [",".join(section.columns)]
    lines += [",".join(_fmt_csv(v) for v in row) for row in section.rows]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def csv_paths(path, sections):
    """First section goes to path; others get the section name appended to the stem."""
    path = Path(path)
    return [path if i == 0 else path.with_name(f"{path.stem}_{s.name}{path.suffix}")
            for i, s in enumerate(sections)]


def render(sections):
    out = []
    for s in sections:
        cells = [list(s.columns)] + [[_fmt_display(v) for v in row] for row in s.rows]
        widths = [max(len(r[j]) for r in cells) for j in range(len(s.columns))]
        out.append(f"# {s.name}")
        out += ["  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in cells]
        out.append("")
    return "\n".join(out)


# ------------------------------------------------------------ static helpers

_STATIC_COLUMNS = {
    # (label, derivative order or force, position as fraction of L)
    "ss": (("w(L/2)", 0, 0.5), ("slope(0)(normalization=raw)", 1, 0.0), ("w''L(L/2)", 2, 0.5),
           ("D_m(0)", "Mbar", 0.0), ("T_m(0)", "Mbbar", 0.0)),
    "clamped": (("w(L/2)", 0, 0.5), ("w''L(L/2)", 2, 0.5), ("D_m(0)", "Mbar", 0.0),
                ("T_m(0)", "Mbbar", 0.0)),
    "cantilever": (("w(L)", 0, 1.0), ("slope(L)(normalization=raw)", 1, 1.0),
                   ("w''L(L/2)", 2, 0.5), ("w'''L^2(L/2)", 3, 0.5), ("D_m(0)", "Mbar", 0.0),
                   ("T_m(0)", "Mbbar", 0.0)),
}
_STATIC_COLUMNS["propped"] = _STATIC_COLUMNS["clamped"]
_DERIV_QUANTITY = ("deflection", "slope", "curvature", "triple_derivative")
_FORCE_QUANTITY = {"M": "bending_moment", "Mbar": "double_moment", "Mbbar": "triple_moment"}


def point_value(x_nodes, field_values, x):
    """Nodal field evaluated at x through the Lagrange interpolant."""
    return float(BarycentricInterpolator(x_nodes, field_values)(x))


def _nd(cfg, quantity, raw):
    return float(nondimensionalize(quantity, raw, cfg.props, cfg.q))


def _static_dq_summary(cfg, case, spec):
    sol = solve_static(case)
    row = []
    for _, what, frac in spec:
        if isinstance(what, int):
            raw = point_value(sol.x, sol.derivs[what], frac * cfg.L)
            row.append(_nd(cfg, _DERIV_QUANTITY[what], raw))
        else:
            end = LEFT if frac == 0 else RIGHT
            row.append(_nd(cfg, _FORCE_QUANTITY[what], sol.forces[(what, end)]))
    return row


def _static_oracle_summary(cfg, kind, scales, spec):
    ex = orc.exact_static(kind, cfg.props.EI, scales.g1, scales.g2, cfg.L, cfg.q)
    row = []
    for _, what, frac in spec:
        if isinstance(what, int):
            row.append(_nd(cfg, _DERIV_QUANTITY[what], ex.deriv(frac * cfg.L, what)[0]))
        else:
            row.append(_nd(cfg, _FORCE_QUANTITY[what], ex.force(what, frac * cfg.L)))
    return row


def _use_oracle(cfg, supported=True):
    if cfg.oracle == "off":
        return False
    if cfg.oracle == "on":
        if not supported:
            raise orc.OracleError("no oracle for this support and analysis")
        return True
    return supported and cfg.scales.oracle_eligible


# ---------------------------------------------------------------- runners

STATION_COLUMNS = ("source", "x/L", "w", "slope(normalization=raw)", "slope(normalization=wL)",
                   "w''L", "w'''L^2")


def _station_row(cfg, source, x, raw):
    w, w1, w2, w3 = raw
    return [source, x / cfg.L, _nd(cfg, "deflection", w), _nd(cfg, "slope", w1),
            _nd(cfg, "slope_wl", w1), _nd(cfg, "curvature", w2), _nd(cfg, "triple_derivative", w3)]


def run_static(cfg):
    case = cfg.case(Static(cfg.q))
    sol = solve_static(case)
    stations = Section("stations", STATION_COLUMNS)
    forces = Section("end_forces", ("source", "end", "B_m", "D_m", "T_m"))
    x = sol.x
    for i in range(len(x)):
        stations.rows.append(_station_row(cfg, "dq", x[i], sol.derivs[:, i]))
    for end in (LEFT, RIGHT):
        forces.rows.append(["dq", end] + [_nd(cfg, _FORCE_QUANTITY[f], sol.forces[(f, end)])
                                          for f in ("M", "Mbar", "Mbbar")])
    oracle_ok = case.kind is not SupportKind.FREE_FREE
    if _use_oracle(cfg, oracle_ok):
        ex = orc.exact_static(case.kind, cfg.props.EI, cfg.g1, cfg.g2, cfg.L, cfg.q)
        for xi in x:
            stations.rows.append(_station_row(cfg, "oracle", xi, [ex.deriv(xi, j)[0] for j in range(4)]))
        for end, xe in ((LEFT, 0.0), (RIGHT, cfg.L)):
            forces.rows.append(["oracle", end] + [_nd(cfg, _FORCE_QUANTITY[f], ex.force(f, xe))
                                                  for f in ("M", "Mbar", "Mbbar")])
    return [stations, forces]


def _max_modes(kind, n):
    rigid = 2 if SupportKind(kind) is SupportKind.FREE_FREE else 0
    return max(n - 2 - rigid, 0)


def _dq_frequencies(cfg, n, kind=None, scales=None, modes=None):
    modes = modes or cfg.modes
    count = min(modes, _max_modes(kind or cfg.bc, n))
    if count == 0:
        return [None] * modes
    res = solve_modal(cfg.case(Vibration(count), n, kind, scales))
    return list(res.frequencies) + [None] * (modes - len(res.frequencies))


def _oracle_frequencies(cfg, kind=None, scales=None, modes=None):
    modes = modes or cfg.modes
    scales = scales or cfg.scales
    roots = orc.exact_frequencies(kind or cfg.bc, cfg.props.EI, cfg.m, scales.g1, scales.g2,
                                  cfg.L, modes)
    return list(roots.values) + [None] * roots.shortfall


def _freq_columns(modes):
    return tuple(f"omega_{j}" for j in range(1, modes + 1))


def run_vibrate(cfg):
    sec = Section("frequencies", ("source", "N") + _freq_columns(cfg.modes))
    res = solve_modal(cfg.case(Vibration(cfg.modes)))
    sec.rows.append(["dq", cfg.n] + list(res.frequencies))
    if _use_oracle(cfg, SupportKind(cfg.bc) is not SupportKind.PROPPED):
        sec.rows.append(["oracle", ""] + _oracle_frequencies(cfg))
    return [sec]


def _oracle_buckling(cfg, kind=None, scales=None):
    scales = scales or cfg.scales
    return orc.exact_buckling(kind or cfg.bc, cfg.props.EI, scales.g1, scales.g2, cfg.L)


def run_buckle(cfg):
    sec = Section("buckling", ("source", "N", "P_bar"))
    sec.rows.append(["dq", cfg.n, solve_buckling(cfg.case(Buckling())).critical_load])
    if _use_oracle(cfg, SupportKind(cfg.bc) is not SupportKind.FREE_FREE):
        sec.rows.append(["oracle", "", _oracle_buckling(cfg)])
    return [sec]


def run_convergence(cfg):
    kind = SupportKind(cfg.bc)
    if cfg.target == "static":
        if kind is SupportKind.FREE_FREE:
            raise AssemblyError("free-free beam under static load has rigid-body modes")
        spec = _STATIC_COLUMNS[kind.value]
        sec = Section("convergence_static", ("source", "N") + tuple(s[0] for s in spec))
        for n in cfg.n_list:
            sec.rows.append(["dq", n] + _static_dq_summary(cfg, cfg.case(Static(cfg.q), n), spec))
        if _use_oracle(cfg):
            sec.rows.append(["oracle", ""] + _static_oracle_summary(cfg, kind, cfg.scales, spec))
    elif cfg.target == "vibrate":
        sec = Section("convergence_vibrate", ("source", "N") + _freq_columns(cfg.modes))
        for n in cfg.n_list:
            sec.rows.append(["dq", n] + _dq_frequencies(cfg, n))
        if _use_oracle(cfg, kind is not SupportKind.PROPPED):
            sec.rows.append(["oracle", ""] + _oracle_frequencies(cfg))
    else:
        sec = Section("convergence_buckle", ("source", "N", "P_bar"))
        for n in cfg.n_list:
            sec.rows.append(["dq", n, solve_buckling(cfg.case(Buckling(), n)).critical_load])
        if _use_oracle(cfg, kind is not SupportKind.FREE_FREE):
            sec.rows.append(["oracle", "", _oracle_buckling(cfg)])
    return [sec]


# ------------------------------------------------------------------- tables

_TABLE_STATIC = {1: "ss", 2: "clamped", 3: "cantilever"}
_TABLE_MODAL = {5: "ss", 6: "clamped", 7: "cantilever", 8: "free-free"}
_TABLE_BUCKLE = ("clamped", "cantilever", "propped")


def _pair_scales(cfg, pair):
    return LengthScales.from_ratios(*pair, cfg.L)


def _table_oracle(cfg):
    return cfg.oracle != "off"


def _table_static(cfg, tid):
    kind = _TABLE_STATIC[tid]
    spec = _STATIC_COLUMNS[kind]
    sec = Section(f"table_{tid}", ("source", "g1/L", "g2/L", "N") + tuple(s[0] for s in spec))
    for pair in G_PAIRS:
        scales = _pair_scales(cfg, pair)
        for n in REFERENCE_N:
            case = cfg.case(Static(cfg.q), n, kind, scales)
            sec.rows.append(["dq", *pair, n] + _static_dq_summary(cfg, case, spec))
        if _table_oracle(cfg):
            sec.rows.append(["oracle", *pair, ""] + _static_oracle_summary(cfg, kind, scales, spec))
    return [sec]


def _table_profile(cfg):
    """Stations along a simply supported beam, g = (0.15, 0.1) L, N = 15."""
    pair, n = G_PAIRS[1], 15
    scales = _pair_scales(cfg, pair)
    sol = solve_static(cfg.case(Static(cfg.q), n, "ss", scales))
    labels = ("w", "slope(normalization=raw)", "w''L", "w'''L^2")
    cols = ["x/L"]
    for lab in labels:
        cols += [f"{lab}:dq", f"{lab}:oracle"]
    sec = Section("table_4", tuple(cols))
    ex = orc.exact_static("ss", cfg.props.EI, scales.g1, scales.g2, cfg.L, cfg.q) \
        if _table_oracle(cfg) else None
    for i, xi in enumerate(sol.x):
        row = [xi / cfg.L]
        for j, q in enumerate(_DERIV_QUANTITY):
            row.append(_nd(cfg, q, sol.derivs[j][i]))
            row.append(_nd(cfg, q, ex.deriv(xi, j)[0]) if ex else None)
        sec.rows.append(row)
    return [sec]


def _table_modal(cfg, tid):
    kind = _TABLE_MODAL[tid]
    sec = Section(f"table_{tid}", ("source", "g1/L", "g2/L", "N") + _freq_columns(6))
    for pair in G_PAIRS:
        scales = _pair_scales(cfg, pair)
        for n in REFERENCE_N:
            sec.rows.append(["dq", *pair, n] + _dq_frequencies(cfg, n, kind, scales, 6))
        if _table_oracle(cfg):
            sec.rows.append(["oracle", *pair, ""] + _oracle_frequencies(cfg, kind, scales, 6))
    return [sec]


def _table_buckle(cfg, kinds):
    cases = [(k, pair) for k in kinds for pair in G_PAIRS]
    cols = tuple(f"{k}:{p[0]}/{p[1]}" for k, p in cases)
    sec = Section(f"table_{9 if kinds == ('ss',) else 10}", ("source", "N") + cols)
    for n in REFERENCE_N:
        sec.rows.append(["dq", n] + [solve_buckling(cfg.case(Buckling(), n, k, _pair_scales(cfg, p))).critical_load
                                     for k, p in cases])
    if _table_oracle(cfg):
        sec.rows.append(["oracle", ""] + [_oracle_buckling(cfg, k, _pair_scales(cfg, p)) for k, p in cases])
    return [sec]


def run_table(cfg):
    tid = cfg.table_id
    if tid in _TABLE_STATIC:
        return _table_static(cfg, tid)
    if tid == 4:
        return _table_profile(cfg)
    if tid in _TABLE_MODAL:
        return _table_modal(cfg, tid)
    return _table_buckle(cfg, ("ss",) if tid == 9 else _TABLE_BUCKLE)


RUNNERS = {"static": run_static, "vibrate": run_vibrate, "buckle": run_buckle,
           "convergence": run_convergence, "table": run_table}


def run(cfg, out=None):
    """Execute a RunConfig; returns (exit code, sections)."""
    out = out or sys.stdout
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IllPosedWarning)
        sections = RUNNERS[cfg.analysis](cfg)
    out.write(render(sections) + "\n")
    if cfg.csv:
        for sec, path in zip(sections, csv_paths(cfg.csv, sections)):
            emit_csv(sec, path)
    return EXIT_OK, sections


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        code, _ = run(cfg)
        return code
    except ConfigError as exc:
        code, msg = EXIT_CONFIG, exc
    except AssemblyError as exc:
        code, msg = EXIT_ASSEMBLY, exc
    except SolverError as exc:
        code, msg = EXIT_SOLVER, exc
    except orc.OracleError as exc:
        code, msg = EXIT_ORACLE, exc
    except OSError as exc:
        code, msg = EXIT_IO, exc
    print(f"sgbeam: error: {msg}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
