"""Command-line front end: state-file ingestion, analysis dispatch, reports.

Commands: analyze, classify, polytope, uniformity, stellar, codes (demo/kl),
mps (compress/dmrg).  Every command is a pure function of its input files,
flags and seed; reports are emitted as ordered key-value lines with floats
printed to 12 significant digits.  Exit codes: 0 success, 1 error, 2 success
with a classification-threshold warning.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import codes as codes_mod
from . import invariants as inv
from . import mps as mps_mod
from . import polytope as poly
from . import stellar as stell
from . import uniformity as uni
from .states import read_state_file, PureState

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_WARNING = 2


class ReportError(ValueError):
    pass


@dataclass
class Report:
    """Ordered key-value lines with unique keys and deterministic formatting."""

    command: str
    entries: list = field(default_factory=list)
    status: int = EXIT_OK

    def add(self, key: str, value, note: str | None = None) -> None:
        if any(k == key for k, _, _ in self.entries):
            raise ReportError(f"duplicate report key {key!r}")
        self.entries.append((key, self._format(value), note))

    def _format(self, value) -> str:
        if isinstance(value, bool):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            value = float(value)
            if math.isnan(value) or math.isinf(value):
                raise ReportError("NaN/Inf is never serialized into a report")
            return f"{value:.12g}"
        if isinstance(value, str):
            return value
        raise ReportError(f"unsupported report value type {type(value)!r}")

    def flag_warning(self) -> None:
        self.status = EXIT_WARNING

    def render(self) -> str:
        lines = [f"# entkit report: {self.command}"]
        for key, val, note in self.entries:
            line = f"{key} {val}"
            if note:
                line += f"  # {note}"
            lines.append(line)
        lines.append(f"status {self.status}")
        return "\n".join(lines) + "\n"


def emit_report(report: Report, path: str | None) -> None:
    """Write to a file or stdout; byte-stable for identical inputs and seeds."""
    text = report.render()
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


@dataclass(frozen=True)
class AnalysisRequest:
    command: str
    options: dict


def parse_state_file(path) -> PureState:
    """Load and normalize a state file (format owned by the states module)."""
    return read_state_file(path)


def _load_state(options) -> PureState:
    path = options.get("state")
    if not path:
        raise ValueError("--state FILE is required")
    return read_state_file(path)


def _add_normalization(report: Report, state: PureState) -> None:
    if abs(state.norm_factor - 1.0) > 1e-12:
        report.add("normalization", state.norm_factor,
                   note="input was rescaled to unit norm")


def _near(value: float, tol: float) -> bool:
    """True when a thresholded quantity falls inside the two-decade margin."""
    return tol / 100.0 < value < tol * 100.0


def _classification_entries(report: Report, state: PureState, tol: float) -> None:
    cls = inv.slocc_classify3(state, tol)
    report.add("slocc", cls.label)
    report.add("rank_a", cls.local_ranks[0])
    report.add("rank_b", cls.local_ranks[1])
    report.add("rank_c", cls.local_ranks[2])
    report.add("det3_abs", cls.det3_abs, note=f"class threshold {tol:g}")
    margins = [cls.det3_abs]
    for site in range(3):
        rest = tuple(s for s in range(3) if s != site)
        m = np.transpose(state.tensor, (site,) + rest).reshape(2, 4)
        margins.extend(np.linalg.svd(m, compute_uv=False))
    if any(_near(v, tol) for v in margins):
        report.flag_warning()
        report.add("warning", "threshold-marginal classification")


def _cmd_analyze(options) -> Report:
    report = Report(command="analyze")
    state = _load_state(options)
    if state.dims != (2, 2, 2):
        raise ValueError("analyze expects a three-qubit state")
    tol = options.get("tol") or inv.DET3_CLASS_TOL
    _add_normalization(report, state)
    li = inv.lu_invariants(state)
    for key, val in [("I1", li.i1), ("I2", li.i2), ("I3", li.i3),
                     ("I4", li.i4), ("I5", li.i5), ("I6", li.i6)]:
        report.add(key, val)
    report.add("det3_re", li.det3.real)
    report.add("det3_im", li.det3.imag)
    tr = inv.tangle_report(state)
    report.add("tau_a_bc", tr.tau_a_bc)
    report.add("tau_b_ac", tr.tau_b_ac)
    report.add("tau_c_ab", tr.tau_c_ab)
    report.add("tau_ab", tr.tau_ab)
    report.add("tau_ac", tr.tau_ac)
    report.add("tau_bc", tr.tau_bc)
    report.add("tau1", tr.tau1)
    report.add("tau2", tr.tau2)
    report.add("tau3", tr.tau3)
    report.add("monogamy_min_residual", min(tr.monogamy_residuals))
    spectra = poly.local_spectra(state)
    for k, lam in enumerate(spectra.lambdas, start=1):
        report.add(f"lambda {k}", lam)
    report.add("w_pyramid", poly.w_pyramid_test(spectra))
    cf = inv.canonical_form3(state)
    for key, val in [("canonical_r0", cf.r0), ("canonical_r1", cf.r1),
                     ("canonical_r2", cf.r2), ("canonical_r3", cf.r3),
                     ("canonical_r4", cf.r4), ("canonical_phi", cf.phi)]:
        report.add(key, val)
    _classification_entries(report, state, tol)
    return report


def _cmd_classify(options) -> Report:
    report = Report(command="classify")
    state = _load_state(options)
    if state.dims != (2, 2, 2):
        raise ValueError("classify expects a three-qubit state")
    tol = options.get("tol") or inv.DET3_CLASS_TOL
    _add_normalization(report, state)
    _classification_entries(report, state, tol)
    return report


def _cmd_polytope(options) -> Report:
    report = Report(command="polytope")
    state = _load_state(options)
    tol = options.get("tol") or poly.SLACK_TOL
    _add_normalization(report, state)
    spectra = poly.local_spectra(state)
    for k, lam in enumerate(spectra.lambdas, start=1):
        report.add(f"lambda {k}", lam)
    check = poly.polygon_check(spectra, tol)
    for k, slack in enumerate(check.slacks, start=1):
        report.add(f"slack {k}", slack)
    report.add("polygon_pass", check.passed)
    if check.passed and check.boundary:
        report.add("boundary", True, note="zero slack within tolerance")
        report.flag_warning()
    if state.num_sites == 3:
        report.add("w_pyramid", poly.w_pyramid_test(spectra, tol))
    report.add("vertex_count", len(poly.polytope_vertices(state.num_sites))
               if 3 <= state.num_sites <= 8 else 0)
    return report


def _cmd_uniformity(options) -> Report:
    report = Report(command="uniformity")
    state = _load_state(options)
    tol = options.get("tol") or uni.KUNIFORM_TOL
    _add_normalization(report, state)
    kmax = options.get("max_k") or state.num_sites // 2
    kmax = min(kmax, state.num_sites // 2)
    for k in range(1, kmax + 1):
        report.add(f"Q{k}", uni.q_measure(state, k))
    level = uni.k_uniform_level(state, tol)
    report.add("k_uniform", level)
    report.add("is_ame", state.num_sites >= 2 and level == state.num_sites // 2)
    return report


def _cmd_stellar(options) -> Report:
    report = Report(command="stellar")
    state = _load_state(options)
    tol = options.get("tol") or stell.DEGENERACY_TOL
    _add_normalization(report, state)
    sym = stell.symmetric_from_pure(state)
    con = stell.to_constellation(sym)
    for k, z in enumerate(con.finite_stars, start=1):
        report.add(f"star {k}", f"{z.real:.12g} {z.imag:.12g}")
    for k in range(con.inf_count):
        report.add(f"star {len(con.finite_stars) + k + 1}", "inf")
    report.add("degeneracy", ",".join(str(m) for m in stell.degeneracy_type(con, tol)))
    if sym.num_qubits in (3, 4):
        cls = stell.classify_sym(sym, tol)
        report.add("class", cls.label)
        if cls.cross_ratio is not None:
            report.add("cross_ratio_re", cls.cross_ratio.real)
            report.add("cross_ratio_im", cls.cross_ratio.imag)
            report.add("ghz_equivalent", cls.ghz_equivalent)
            report.add("tetrahedral", cls.tetrahedral)
            report.add("concyclic", cls.concyclic)
    fi = stell.form_invariants(stell.form_from_sym(sym), sym.num_qubits) \
        if sym.num_qubits in (2, 3, 4) else None
    if fi is not None:
        report.add("discriminant_abs", abs(fi.discriminant))
        if fi.i1 is not None:
            report.add("quartic_i1_abs", abs(fi.i1))
            report.add("quartic_i2_abs", abs(fi.i2))
    return report


def _named_code(options) -> codes_mod.LinearCode:
    if options.get("code"):
        return codes_mod.read_code_file(options["code"])
    if options.get("repetition"):
        return codes_mod.repetition_code()
    return codes_mod.hamming_code()


def _cmd_codes_demo(options) -> Report:
    report = Report(command="codes demo")
    code = _named_code(options)
    report.add("n", code.n)
    report.add("k", code.k)
    d = codes_mod.min_distance(code)
    report.add("min_distance", d if d is not None else "undefined")
    report.add("standard_form", code.standard_form)
    if code.parity_check is not None:
        ok = not ((code.parity_check @ code.generator.T) % 2).any()
        report.add("parity_check_ok", ok)
        syndromes = {tuple(code.parity_check[:, j] % 2) for j in range(code.n)}
        report.add("weight1_syndromes_distinct", len(syndromes) == code.n)
        message = "0101"[:code.k].ljust(code.k, "0")
        cw = codes_mod.encode(code, message)
        report.add("encode_input", message)
        report.add("encode_output", "".join(str(b) for b in cw))
    return report


def _cmd_codes_kl(options) -> Report:
    report = Report(command="codes kl")
    state = _load_state(options)
    w = options.get("weight")
    if w is None:
        raise ValueError("--weight W is required")
    tol = options.get("tol") or codes_mod.KL_TOL
    res = codes_mod.knill_laflamme_check(state, int(w), tol)
    report.add("weight", res.weight)
    report.add("num_errors", res.num_errors)
    report.add("worst_violation", res.worst_violation, note=f"tolerance {tol:g}")
    report.add("kl_pass", res.passed)
    return report


def _cmd_mps_compress(options) -> Report:
    report = Report(command="mps compress")
    state = _load_state(options)
    bond = options.get("max_bond")
    if bond is None:
        raise ValueError("--max-bond D is required")
    _add_normalization(report, state)
    full = mps_mod.from_dense(state)
    report.add("bond_dims_exact", ",".join(str(d) for d in full.bond_dims))
    truncated, discarded = mps_mod.truncate(full, int(bond))
    report.add("bond_dims_truncated", ",".join(str(d) for d in truncated.bond_dims))
    for k, wgt in enumerate(discarded, start=1):
        report.add(f"discarded {k}", wgt)
    for k in range(len(truncated.bond_dims)):
        report.add(f"entropy {k + 1}", mps_mod.entanglement_entropy(truncated, k))
    report.add("fidelity", abs(mps_mod.to_dense(truncated).overlap(state)) ** 2)
    report.add("canonical_residual", mps_mod.check_canonical(truncated).max_residual)
    out_mps = options.get("out_mps")
    if out_mps:
        mps_mod.write_mps_file(out_mps, truncated)
        report.add("mps_file", out_mps)
    return report


def _cmd_mps_dmrg(options) -> Report:
    report = Report(command="mps dmrg")
    model = options.get("model") or "ising"
    sites = options.get("sites")
    bond = options.get("max_bond")
    seed = options.get("seed")
    if sites is None or bond is None:
        raise ValueError("--sites K and --bond D are required")
    if seed is None:
        raise ValueError("--seed is required for stochastic commands")
    if model == "ising":
        ham = mps_mod.ising_hamiltonian(int(sites), float(options.get("g") or 0.0))
    elif model == "heisenberg":
        ham = mps_mod.heisenberg_hamiltonian(int(sites))
    else:
        raise ValueError(f"unknown model {model!r}")
    tol = options.get("tol") or 1e-10
    res = mps_mod.dmrg_ground_state(ham, int(bond), tol=tol, seed=int(seed))
    report.add("model", model)
    if model == "ising":
        report.add("g", float(options.get("g") or 0.0))
    report.add("sites", int(sites))
    report.add("bond", int(bond))
    report.add("energy", res.energy)
    report.add("sweeps", res.num_sweeps)
    report.add("converged", res.converged)
    for i, e in enumerate(res.rayleigh_history, start=1):
        report.add(f"sweep_energy {i}", e)
    return report


_COMMANDS = {
    "analyze": _cmd_analyze,
    "classify": _cmd_classify,
    "polytope": _cmd_polytope,
    "uniformity": _cmd_uniformity,
    "stellar": _cmd_stellar,
    "codes demo": _cmd_codes_demo,
    "codes kl": _cmd_codes_kl,
    "mps compress": _cmd_mps_compress,
    "mps dmrg": _cmd_mps_dmrg,
}


def run(request: AnalysisRequest) -> Report:
    """Dispatch a request to the owning module and collect its report."""
    handler = _COMMANDS.get(request.command)
    if handler is None:
        raise ValueError(f"unknown command {request.command!r}")
    return handler(request.options)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entkit",
        description="Multipartite entanglement analysis toolbox")
    parser.add_argument("--threads", type=int, default=1,
                        help="upper bound on worker threads (computation is "
                             "deterministic regardless)")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("--state", help="input state file")
        p.add_argument("--out", help="report destination (default stdout)")
        p.add_argument("--tol", type=float, help="override the documented default tolerance")
        if seed:
            p.add_argument("--seed", type=int, help="RNG seed (mandatory when stochastic)")

    for name in ("analyze", "classify", "polytope", "stellar"):
        common(sub.add_parser(name))
    p = sub.add_parser("uniformity")
    common(p)
    p.add_argument("--max-k", dest="max_k", type=int, help="largest subset size to report")

    codes = sub.add_parser("codes").add_subparsers(dest="subcommand", required=True)
    p = codes.add_parser("demo")
    p.add_argument("--hamming", action="store_true", help="use the [7,4,3] Hamming code")
    p.add_argument("--repetition", action="store_true", help="use the [12,4,3] repetition code")
    p.add_argument("--code", help="load a generator matrix from a code file")
    p.add_argument("--out")
    p = codes.add_parser("kl")
    common(p)
    p.add_argument("--weight", type=int, help="maximal error weight")

    mps = sub.add_parser("mps").add_subparsers(dest="subcommand", required=True)
    p = mps.add_parser("compress")
    common(p)
    p.add_argument("--max-bond", dest="max_bond", type=int, help="bond dimension cap")
    p.add_argument("--out-mps", dest="out_mps", help="write the compressed MPS here")
    p = mps.add_parser("dmrg")
    common(p, seed=True)
    p.add_argument("--model", choices=("ising", "heisenberg"), default="ising")
    p.add_argument("--g", type=float, help="transverse field strength")
    p.add_argument("--sites", type=int, help="chain length")
    p.add_argument("--bond", dest="max_bond", type=int, help="bond dimension")
    return parser


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:   # argparse uses exit code 2, reserved here for warnings
        return EXIT_OK if exc.code in (0, None) else EXIT_ERROR
    command = args.command
    if getattr(args, "subcommand", None):
        command = f"{command} {args.subcommand}"
    options = {k: v for k, v in vars(args).items()
               if k not in ("command", "subcommand") and v is not None}
    try:
        report = run(AnalysisRequest(command=command, options=options))
    except Exception as exc:  # surface module errors with context, exit 1
        print(f"entkit: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    emit_report(report, options.get("out"))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
