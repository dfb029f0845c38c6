"""Sign-matrix synthesis and checking for decoupling, selective coupling,
pair coupling and time reversal.

A zz-framework scheme is one n x m sign matrix; a general-framework scheme is
three sign matrices S_x, S_y, S_z tied by the entry-wise product
S_x * S_y = S_z.  Qubit indices in the public API are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .errors import SizeCapExceeded
from .hadamard import DEFAULT_SIZE_CAP, best_matrix
from .ghm import compose_sylvester, constructible_lambdas, gh_for_lambda
from .schur import five_rows, partition_sylvester, sylvester

LABELS = ("x", "y", "z")


@dataclass(frozen=True)
class SignMatrix:
    entries: np.ndarray  # n x m, +/-1

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int8)
        if e.ndim != 2 or not np.all(np.abs(e) == 1):
            raise ValueError("sign matrix must be a 2-d array of +1/-1")
        object.__setattr__(self, "entries", e)

    @property
    def qubits(self) -> int:
        return self.entries.shape[0]

    @property
    def intervals(self) -> int:
        return self.entries.shape[1]


@dataclass(frozen=True)
class SignTriple:
    sx: SignMatrix
    sy: SignMatrix
    sz: SignMatrix

    def __post_init__(self):
        shapes = {self.sx.entries.shape, self.sy.entries.shape, self.sz.entries.shape}
        if len(shapes) != 1:
            raise ValueError("S_x, S_y, S_z must have identical shape")

    def schur_consistent(self) -> bool:
        """True when S_x * S_y = S_z entry-wise (checked, not assumed, so a
        corrupted scheme can still be loaded and reported on)."""
        return bool(np.all(self.sx.entries * self.sy.entries == self.sz.entries))

    @property
    def qubits(self) -> int:
        return self.sx.qubits

    @property
    def intervals(self) -> int:
        return self.sx.intervals

    def matrix(self, label: str) -> SignMatrix:
        return {"x": self.sx, "y": self.sy, "z": self.sz}[label]


Scheme = SignMatrix | SignTriple


@dataclass(frozen=True)
class TaskSpec:
    """What a scheme is supposed to do.

    kind: decouple | select | select_pair | reverse.
    select carries (l, k) in `qubits` plus Pauli `labels` (general framework);
    select_pair carries (i, j).
    """

    kind: str
    framework: str
    qubits: tuple[int, ...] = ()
    labels: tuple[str, str] | None = None
    remove_local_terms: bool = True

    def __post_init__(self):
        if self.kind not in ("decouple", "select", "select_pair", "reverse"):
            raise ValueError(f"unknown task kind {self.kind!r}")
        if self.framework not in ("zz", "general"):
            raise ValueError(f"unknown framework {self.framework!r}")
        if self.kind in ("select", "select_pair"):
            if len(self.qubits) != 2 or self.qubits[0] == self.qubits[1]:
                raise ValueError("select tasks need two distinct qubit indices")
        if self.kind == "select" and self.framework == "general":
            if self.labels is None or any(l not in LABELS for l in self.labels):
                raise ValueError("general selection needs two Pauli labels x/y/z")
        if self.kind == "select_pair" and self.framework != "general":
            raise ValueError("pair selection only exists in the general framework")


@dataclass(frozen=True)
class CheckOutcome:
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class SchemeReport:
    qubits: int
    framework: str
    intervals: int
    overhead: float
    gate_count: int
    checks: dict[str, CheckOutcome] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def lines(self) -> list[str]:
        out = [
            f"qubits={self.qubits}",
            f"framework={self.framework}",
            f"intervals={self.intervals}",
            f"overhead={self.overhead:.6g}",
            f"gates={self.gate_count}",
        ]
        for name, c in sorted(self.checks.items()):
            out.append(f"check.{name}={'pass' if c.passed else 'FAIL'}"
                       + (f" ({c.detail})" if c.detail and not c.passed else ""))
        out.append(f"result={'pass' if self.passed else 'FAIL'}")
        return out


# ---------------------------------------------------------------------------
# zz-framework synthesis

def _zz_rows(count: int, zero_sums: bool, cap: int) -> np.ndarray:
    """`count` pairwise-orthogonal rows of a normalized Hadamard matrix;
    rows 2.. (zero row sums) when zero_sums, rows 1.. otherwise."""
    want = count + 1 if zero_sums else count
    h = best_matrix(want, cap)
    start = 1 if zero_sums else 0
    return h.entries[start:start + count]


def synth_decouple_zz(n: int, remove_local_terms: bool = True,
                      cap: int = DEFAULT_SIZE_CAP) -> SignMatrix:
    """n orthogonal rows; m = best constructible order holding them."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SignMatrix(_zz_rows(n, remove_local_terms, cap))


def synth_select_zz(n: int, i: int, j: int, remove_local_terms: bool = True,
                    cap: int = DEFAULT_SIZE_CAP) -> SignMatrix:
    """All rows orthogonal except rows i and j, which are identical."""
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ValueError("need two distinct qubit indices in range")
    rows = _zz_rows(n - 1, remove_local_terms, cap)
    entries = np.empty((n, rows.shape[1]), dtype=np.int8)
    others = [q for q in range(n) if q != j]
    for pos, q in enumerate(others):
        entries[q] = rows[pos]
    entries[j] = entries[i]
    return SignMatrix(entries)


def synth_reverse_zz(n: int, remove_local_terms: bool = True,
                     cap: int = DEFAULT_SIZE_CAP) -> SignMatrix:
    """Drop the first (all +) column of a decoupling matrix: every row pair
    then has inner product -1, and with zero-sum rows every row sum is -1."""
    rows = _zz_rows(n, remove_local_terms, cap)
    return SignMatrix(rows[:, 1:])


# ---------------------------------------------------------------------------
# general-framework synthesis

@dataclass(frozen=True)
class _Candidate:
    intervals: int
    kind: str              # "sylvester" | "composed"
    r: int
    lam: int = 0

    def describe(self) -> str:
        if self.kind == "sylvester":
            return f"sylvester({self.r})"
        return f"compose(sylvester({self.r}),gh(4,{self.lam}))"


def _candidates(cap: int) -> list[_Candidate]:
    """All constructions under the cap, cheapest first, Sylvester preferred
    on ties."""
    out = []
    r = 2
    while (1 << r) <= cap:
        out.append(_Candidate(1 << r, "sylvester", r))
        r += 1
    for lam in constructible_lambdas(cap):
        r0 = 2
        while 4 * lam * (1 << r0) <= cap:
            out.append(_Candidate(4 * lam * (1 << r0), "composed", r0, lam))
            r0 += 1
    out.sort(key=lambda c: (c.intervals, c.kind != "sylvester", c.r, c.lam))
    return out


def sylvester_triple_count(r: int) -> int:
    return (2 ** r - 1) // 3 if r % 2 == 0 else (2 ** r - 5) // 3


def _construction_rows(cand: _Candidate, cap: int):
    """(row accessor, index triples, five-row indices or None) for a candidate."""
    if cand.kind == "sylvester":
        h = sylvester(cand.r, cap)
        p = partition_sylvester(cand.r)
        five = five_rows(cand.r).indices if cand.r >= 3 else None
        return h.entries, list(p.triples), five
    comp = compose_sylvester(cand.r, gh_for_lambda(cand.lam), cap=cap)
    return comp.hprime.entries, list(comp.triples), comp.f_rows


def _triple_from_rows(rows: np.ndarray, assignment: list[dict[str, np.ndarray]]) -> SignTriple:
    n = len(assignment)
    m = rows.shape[1]
    mats = {l: np.empty((n, m), dtype=np.int8) for l in LABELS}
    for q, rowmap in enumerate(assignment):
        for l in LABELS:
            mats[l][q] = rowmap[l]
    return SignTriple(SignMatrix(mats["x"]), SignMatrix(mats["y"]), SignMatrix(mats["z"]))


def synth_decouple_general(n: int, cap: int = DEFAULT_SIZE_CAP) -> SignTriple:
    """One Schur triple of Hadamard rows per qubit; every pair of distinct
    rows orthogonal, S_x*S_y=S_z by the triple structure, zero row sums."""
    if n < 1:
        raise ValueError("n must be >= 1")
    for cand in _candidates(cap):
        if cand.kind == "sylvester":
            capacity = sylvester_triple_count(cand.r)
        else:
            capacity = 4 * cand.lam * sylvester_triple_count(cand.r)
        if capacity < n:
            continue
        rows, triples, _ = _construction_rows(cand, cap)
        assignment = []
        for q in range(n):
            a, b, c = triples[q]
            assignment.append({"x": rows[a], "y": rows[b], "z": rows[c]})
        return _triple_from_rows(rows, assignment)
    raise SizeCapExceeded(f"no construction with {n} Schur triples under cap {cap}")


def _third_label(a: str, b: str) -> str:
    return next(l for l in LABELS if l not in (a, b))


def synth_select_general(n: int, l: int, k: int, gamma: str, eta: str,
                         cap: int = DEFAULT_SIZE_CAP) -> SignTriple:
    """Decoupling scheme modified so row l of S_gamma equals row k of S_eta.

    Uses the five-row feature f1*f2 = f3*f4 = f5: qubit l takes (f5, f1, f2),
    qubit k takes (f3, f5, f4), and any Schur triple containing one of the
    five rows is excluded from the remaining qubits.  A same-label selection
    is the eta != gamma scheme with the k-th rows of S_gamma and S_eta
    swapped afterwards.
    """
    if not (0 <= l < n and 0 <= k < n) or l == k:
        raise ValueError("need two distinct qubit indices in range")
    if gamma not in LABELS or eta not in LABELS:
        raise ValueError("labels must be x, y or z")
    aux = eta if eta != gamma else ("x" if gamma != "x" else "y")
    nu = _third_label(gamma, aux)
    for cand in _candidates(cap):
        if cand.kind == "sylvester" and cand.r < 3:
            continue
        rows, triples, five = _construction_rows(cand, cap)
        if five is None:
            continue
        fset = set(five)
        free = [t for t in triples if not (set(t) & fset)]
        if len(free) < n - 2:
            continue
        f1, f2, f3, f4, f5 = (rows[i] for i in five)
        assignment: list[dict[str, np.ndarray]] = []
        others = iter(free)
        for q in range(n):
            if q == l:
                assignment.append({gamma: f5, aux: f1, nu: f2})
            elif q == k:
                assignment.append({gamma: f3, aux: f5, nu: f4})
            else:
                a, b, c = next(others)
                assignment.append({"x": rows[a], "y": rows[b], "z": rows[c]})
        if eta == gamma:
            assignment[k][gamma], assignment[k][aux] = (
                assignment[k][aux], assignment[k][gamma])
        return _triple_from_rows(rows, assignment)
    raise SizeCapExceeded(
        f"no construction with enough free Schur triples for n={n} under cap {cap}")


def synth_select_pair(n: int, i: int, j: int, cap: int = DEFAULT_SIZE_CAP) -> SignTriple:
    """Keep every coupling between qubits i and j: their rows are all +1 in
    S_x, S_y, S_z and the other n-2 qubits are decoupled as usual."""
    if not (0 <= i < n and 0 <= j < n) or i == j:
        raise ValueError("need two distinct qubit indices in range")
    if n == 2:
        ones = SignMatrix(np.ones((2, 1), dtype=np.int8))
        return SignTriple(ones, ones, ones)
    base = synth_decouple_general(n - 2, cap)
    m = base.intervals
    mats = {l: np.ones((n, m), dtype=np.int8) for l in LABELS}
    others = [q for q in range(n) if q not in (i, j)]
    for pos, q in enumerate(others):
        for l in LABELS:
            mats[l][q] = base.matrix(l).entries[pos]
    return SignTriple(SignMatrix(mats["x"]), SignMatrix(mats["y"]), SignMatrix(mats["z"]))


def synth_reverse_general(n: int, cap: int = DEFAULT_SIZE_CAP) -> SignTriple:
    """Drop the first column of a general decoupling scheme; the construction
    guarantees that column is all +."""
    base = synth_decouple_general(n, cap)
    cols = {}
    for l in LABELS:
        e = base.matrix(l).entries
        if not np.all(e[:, 0] == 1):
            raise AssertionError("construction must yield an all-+ first column")
        cols[l] = e[:, 1:]
    return SignTriple(SignMatrix(cols["x"]), SignMatrix(cols["y"]), SignMatrix(cols["z"]))


def synth(task: TaskSpec, n: int, cap: int = DEFAULT_SIZE_CAP) -> Scheme:
    """Dispatch a TaskSpec to the matching synthesizer."""
    if task.framework == "zz":
        if task.kind == "decouple":
            return synth_decouple_zz(n, task.remove_local_terms, cap)
        if task.kind == "select":
            return synth_select_zz(n, *task.qubits, task.remove_local_terms, cap)
        if task.kind == "reverse":
            return synth_reverse_zz(n, task.remove_local_terms, cap)
        raise ValueError(f"task {task.kind} unsupported in zz framework")
    if task.kind == "decouple":
        return synth_decouple_general(n, cap)
    if task.kind == "select":
        return synth_select_general(n, *task.qubits, *task.labels, cap)
    if task.kind == "select_pair":
        return synth_select_pair(n, *task.qubits, cap)
    if task.kind == "reverse":
        return synth_reverse_general(n, cap)
    raise ValueError(f"task {task.kind} unsupported in general framework")


# ---------------------------------------------------------------------------
# criteria checking

def _stacked(scheme: SignTriple) -> tuple[np.ndarray, list[tuple[str, int]]]:
    """All 3n rows with (label, qubit) identity, grouped x/y/z per qubit."""
    rows = []
    ident = []
    for q in range(scheme.qubits):
        for l in LABELS:
            rows.append(scheme.matrix(l).entries[q])
            ident.append((l, q))
    return np.stack(rows), ident


def _gram(rows: np.ndarray) -> np.ndarray:
    return rows.astype(np.int64) @ rows.astype(np.int64).T


def check_scheme(scheme: Scheme, task: TaskSpec) -> SchemeReport:
    """Evaluate every applicable criterion with exact integer arithmetic."""
    from .pulses import compile_general, compile_zz, gate_count

    checks: dict[str, CheckOutcome] = {}
    n = scheme.qubits
    m = scheme.intervals
    if task.kind in ("select", "select_pair") and max(task.qubits) >= n:
        raise ValueError("task qubit index out of range for scheme")

    if isinstance(scheme, SignMatrix):
        if task.framework != "zz":
            raise ValueError("single sign matrix is a zz-framework scheme")
        gram = _gram(scheme.entries)
        target = m * np.eye(n, dtype=np.int64)
        if task.kind == "decouple":
            bad = _offdiag_mismatches(gram, target)
            checks["orthogonality"] = _outcome(bad)
        elif task.kind == "select":
            i, j = task.qubits
            target[i, j] = target[j, i] = m
            bad = _offdiag_mismatches(gram, target)
            checks["orthogonality"] = _outcome(bad)
            checks["designated_pair"] = CheckOutcome(
                bool(np.array_equal(scheme.entries[i], scheme.entries[j])),
                f"rows {i} and {j} must be identical")
        elif task.kind == "reverse":
            bad = [(i, j) for i in range(n) for j in range(i + 1, n)
                   if gram[i, j] != -1]
            checks["inner_products"] = _outcome(bad, "row pairs with inner product != -1")
            if task.remove_local_terms:
                sums = scheme.entries.sum(axis=1)
                checks["row_sums"] = _outcome(
                    [int(q) for q in np.nonzero(sums != -1)[0]], "rows with sum != -1")
        else:
            raise ValueError(f"task {task.kind} unsupported in zz framework")
        if task.kind in ("decouple", "select") and task.remove_local_terms:
            sums = scheme.entries.sum(axis=1)
            checks["zero_row_sums"] = _outcome(
                [int(q) for q in np.nonzero(sums != 0)[0]], "rows with nonzero sum")
        schedule = compile_zz(scheme)
        overhead = m / n
    else:
        if task.framework != "general":
            raise ValueError("a sign triple is a general-framework scheme")
        prod = scheme.sx.entries * scheme.sy.entries * scheme.sz.entries
        bad_cells = list(zip(*np.nonzero(prod != 1)))
        checks["schur_product"] = _outcome(
            [(int(a), int(b)) for a, b in bad_cells], "cells violating S_x*S_y=S_z")
        rows, ident = _stacked(scheme)
        gram = _gram(rows)
        total = len(ident)

        def pos(label: str, qubit: int) -> int:
            return ident.index((label, qubit))

        if task.kind == "decouple":
            bad = _offdiag_mismatches(gram, m * np.eye(total, dtype=np.int64))
            checks["orthogonality"] = _outcome(bad)
        elif task.kind == "select":
            g, e = task.labels
            l, k = task.qubits
            target = m * np.eye(total, dtype=np.int64)
            a, b = pos(g, l), pos(e, k)
            target[a, b] = target[b, a] = m
            bad = _offdiag_mismatches(gram, target)
            checks["orthogonality"] = _outcome(bad)
            checks["designated_pair"] = CheckOutcome(
                bool(np.array_equal(rows[a], rows[b])),
                f"S_{g} row {l} must equal S_{e} row {k}")
        elif task.kind == "select_pair":
            i, j = task.qubits
            pair_rows = {pos(l, q) for l in LABELS for q in (i, j)}
            ones = all(np.all(rows[p] == 1) for p in pair_rows)
            checks["pair_rows_all_plus"] = CheckOutcome(
                ones, f"rows of qubits {i},{j} must be all +")
            bad = [(a, b) for a in range(total) for b in range(a + 1, total)
                   if not (a in pair_rows and b in pair_rows) and gram[a, b] != 0]
            checks["orthogonality"] = _outcome(bad)
        elif task.kind == "reverse":
            bad = [(a, b) for a in range(total) for b in range(a + 1, total)
                   if gram[a, b] != -1]
            checks["inner_products"] = _outcome(bad, "row pairs with inner product != -1")
            if task.remove_local_terms:
                sums = rows.sum(axis=1)
                checks["row_sums"] = _outcome(
                    [int(q) for q in np.nonzero(sums != -1)[0]], "rows with sum != -1")
        if task.kind in ("decouple", "select") and task.remove_local_terms:
            sums = rows.sum(axis=1)
            checks["zero_row_sums"] = _outcome(
                [int(q) for q in np.nonzero(sums != 0)[0]], "rows with nonzero sum")
        # a triple violating the Schur constraint has no gate realization
        schedule = compile_general(scheme) if checks["schur_product"].passed else None
        overhead = m / (3 * n)

    return SchemeReport(
        qubits=n,
        framework=task.framework,
        intervals=m,
        overhead=overhead,
        gate_count=gate_count(schedule) if schedule is not None else 0,
        checks=checks,
    )


def _offdiag_mismatches(gram: np.ndarray, target: np.ndarray) -> list[tuple[int, int]]:
    bad = np.argwhere((gram != target) & ~np.eye(gram.shape[0], dtype=bool))
    return [(int(a), int(b)) for a, b in bad if a < b]


def _outcome(bad: list, what: str = "non-orthogonal row pairs") -> CheckOutcome:
    if not bad:
        return CheckOutcome(True)
    shown = ", ".join(map(str, bad[:8]))
    more = "" if len(bad) <= 8 else f" (+{len(bad) - 8} more)"
    return CheckOutcome(False, f"{what}: {shown}{more}")


# ---------------------------------------------------------------------------
# scheme file format

def _format_task(task: TaskSpec) -> str:
    if task.kind == "decouple":
        body = "decouple"
    elif task.kind == "reverse":
        body = "reverse"
    elif task.kind == "select" and task.framework == "zz":
        i, j = task.qubits
        body = f"select:{i + 1},{j + 1}"
    elif task.kind == "select":
        l, k = task.qubits
        g, e = task.labels
        body = f"select:{l + 1},{k + 1},{g},{e}"
    else:
        i, j = task.qubits
        body = f"pair:{i + 1},{j + 1}"
    return body


def parse_task(body: str, framework: str, remove_local_terms: bool) -> TaskSpec:
    """Parse the task=... field; qubit indices in files are 1-based."""
    if body == "decouple" or body == "reverse":
        return TaskSpec(body, framework, remove_local_terms=remove_local_terms)
    head, _, rest = body.partition(":")
    parts = rest.split(",") if rest else []
    if head == "select" and framework == "zz" and len(parts) == 2:
        return TaskSpec("select", framework, qubits=(int(parts[0]) - 1, int(parts[1]) - 1),
                        remove_local_terms=remove_local_terms)
    if head == "select" and framework == "general" and len(parts) == 4:
        return TaskSpec("select", framework,
                        qubits=(int(parts[0]) - 1, int(parts[1]) - 1),
                        labels=(parts[2], parts[3]),
                        remove_local_terms=remove_local_terms)
    if head == "pair" and len(parts) == 2:
        return TaskSpec("select_pair", framework,
                        qubits=(int(parts[0]) - 1, int(parts[1]) - 1),
                        remove_local_terms=remove_local_terms)
    raise ValueError(f"cannot parse task {body!r}")


def _write_block(entries: np.ndarray, stream: IO[str]) -> None:
    n, m = entries.shape
    stream.write(f"rows {n} {m}\n")
    for row in entries:
        stream.write("".join("+" if v == 1 else "-" for v in row) + "\n")


def _read_block(stream: IO[str]) -> np.ndarray:
    header = stream.readline().split()
    if len(header) != 3 or header[0] != "rows":
        raise ValueError("sign-matrix block must start with 'rows n m'")
    n, m = int(header[1]), int(header[2])
    rows = []
    for _ in range(n):
        line = stream.readline().strip()
        if len(line) != m or set(line) - {"+", "-"}:
            raise ValueError(f"bad sign-matrix row {line!r}")
        rows.append([1 if c == "+" else -1 for c in line])
    return np.array(rows, dtype=np.int8)


def write_scheme(scheme: Scheme, task: TaskSpec, stream: IO[str]) -> None:
    header = (f"scheme {task.framework} n={scheme.qubits} m={scheme.intervals} "
              f"task={_format_task(task)} local={int(task.remove_local_terms)}\n")
    stream.write(header)
    if isinstance(scheme, SignMatrix):
        _write_block(scheme.entries, stream)
    else:
        for l in LABELS:
            _write_block(scheme.matrix(l).entries, stream)


def read_scheme(stream: IO[str]) -> tuple[Scheme, TaskSpec]:
    header = stream.readline().split()
    if len(header) < 2 or header[0] != "scheme":
        raise ValueError("scheme file must start with 'scheme <framework> ...'")
    framework = header[1]
    fields = dict(part.split("=", 1) for part in header[2:])
    task = parse_task(fields["task"], framework, bool(int(fields.get("local", "1"))))
    if framework == "zz":
        scheme: Scheme = SignMatrix(_read_block(stream))
    else:
        mats = [_read_block(stream) for _ in range(3)]
        scheme = SignTriple(SignMatrix(mats[0]), SignMatrix(mats[1]), SignMatrix(mats[2]))
    if scheme.qubits != int(fields["n"]) or scheme.intervals != int(fields["m"]):
        raise ValueError("scheme header does not match matrix block shape")
    return scheme, task
