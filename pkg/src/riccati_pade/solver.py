"""Root location and tracking for Hankel-determinant conditions.

Roots of H_D^d = 0 are located by sign-change scans plus safeguarded Newton
iteration (the derivative comes from Dual propagation through the whole
pipeline), then tracked across increasing dimension D.  A sequence is
classified as converged when its last three successive deltas decrease
monotonically and the final delta drops below 10^(-target_digits).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .hankel import HankelProblem, hankel_eval, hankel_eval_value
from .potentials import PotentialSpec
from .rings import BigReal, digits_for_dimension, floor_log10_abs
from .series import GeometrySpec, SingularAnsatzError


class RootLostError(RuntimeError):
    pass


STATUS_CONVERGED = "converged"
STATUS_DRIFTING = "drifting"
STATUS_LOST = "lost"


@dataclass
class RootSequence:
    """Roots of one Hankel condition for increasing D."""

    problem: HankelProblem          # D field holds the last dimension reached
    entries: list[tuple[int, BigReal]]
    converged: BigReal | None
    est_correct_digits: int
    status: str
    label: int | None = None        # state index n once assigned

    @property
    def last_root(self) -> BigReal:
        return self.entries[-1][1]

    def to_json(self) -> str:
        payload = {
            "potential": self.problem.potential.family,
            "geometry": self.problem.geometry.label(),
            "ansatz": self.problem.ansatz,
            "d": self.problem.d,
            "unknown": self.problem.unknown,
            "fixed_value": str(self.problem.fixed_value),
            "status": self.status,
            "est_correct_digits": self.est_correct_digits,
            "converged": self.converged.to_decimal() if self.converged else None,
            "label": self.label,
            "entries": [{"D": D, "root": r.to_decimal()} for D, r in self.entries],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))


@dataclass
class EigenBracket:
    """Empirical enclosure: d=1 root (lower) and d=0 root (upper)."""

    lower: BigReal
    upper: BigReal
    state: int
    lower_seq: RootSequence | None = None
    upper_seq: RootSequence | None = None

    @property
    def width(self) -> BigReal:
        return self.upper - self.lower

    @property
    def midpoint(self) -> BigReal:
        return (self.upper + self.lower) / 2


def _eval_value(problem: HankelProblem, x: BigReal):
    """Determinant value at x, or None where the ansatz is singular."""
    try:
        return hankel_eval_value(problem, x)
    except (SingularAnsatzError, ZeroDivisionError):
        return None


def scan_sign_changes(problem: HankelProblem, lo, hi,
                      grid_points: int = 64,
                      digits: int | None = None) -> list[tuple[BigReal, BigReal]]:
    """All adjacent grid pairs where the determinant changes sign.

    Grid points where the ansatz is singular are skipped (they break the
    adjacency, so no bracket spans them).
    """
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    digits = digits or problem.auto_digits()
    lo = BigReal(lo, digits)
    hi = BigReal(hi, digits)
    if not lo < hi:
        raise ValueError("empty scan range")
    step = (hi - lo) / (grid_points - 1)
    brackets = []
    prev_x = prev_v = None
    for i in range(grid_points):
        x = lo + step * i
        v = _eval_value(problem, x)
        if v is None:
            prev_x = prev_v = None
            continue
        if v.is_zero():
            brackets.append((x, x))
            prev_x = prev_v = None
            continue
        if prev_v is not None and (prev_v < 0) != (v < 0):
            brackets.append((prev_x, x))
        prev_x, prev_v = x, v
    return brackets


def refine_root(problem: HankelProblem, seed, bracket=None,
                digits: int | None = None, max_iter: int = 60,
                tol_digits: int | None = None) -> BigReal:
    """Newton iteration on H_D^d from `seed`.

    With a bracket the iteration is safeguarded: Newton candidates outside
    the current enclosure are replaced by bisection steps, so the root can
    never be lost to a wild step.  Terminates when the step drops below
    10^(-tol_digits), relative to 1+|x|; the default tolerance is five
    digits short of the working precision.
    """
    digits = digits or problem.auto_digits()
    if tol_digits is None:
        tol_digits = digits - 5
    tol_digits = min(tol_digits, digits - 5)
    tol = BigReal(Fraction(1, 10 ** tol_digits), digits)
    x = BigReal(seed, digits)

    if bracket is None:
        for _ in range(max_iter):
            h = hankel_eval(problem, x)
            if h.val.is_zero():
                return x
            if h.der.is_zero():
                raise RootLostError("Newton hit a zero derivative")
            step = h.val / h.der
            x = x - step
            if abs(step) <= tol * (1 + abs(x)):
                return x
        raise RootLostError("Newton failed to converge")

    lo, hi = BigReal(bracket[0], digits), BigReal(bracket[1], digits)
    if not lo < hi:
        return lo  # degenerate bracket from an exact grid hit
    flo = _eval_value(problem, lo)
    fhi = _eval_value(problem, hi)
    if flo is None or fhi is None:
        raise RootLostError("singular ansatz at bracket endpoint")
    if flo.is_zero():
        return lo
    if fhi.is_zero():
        return hi
    if (flo < 0) == (fhi < 0):
        return refine_root(problem, seed, None, digits, max_iter)
    if not (lo <= x <= hi):
        x = (lo + hi) / 2
    # bisection may need ~3.4 iterations per digit in the worst case
    for _ in range(max_iter + int(3.5 * tol_digits) + 20):
        h = hankel_eval(problem, x)
        if h.val.is_zero():
            return x
        if (h.val < 0) == (flo < 0):
            lo, flo = x, h.val
        else:
            hi = x
        cand = None
        if not h.der.is_zero():
            step = h.val / h.der
            cand = x - step
            if not (lo < cand < hi):
                cand = None
            elif abs(step) <= tol * (1 + abs(cand)):
                return cand
        if cand is None:
            cand = (lo + hi) / 2
            if hi - lo <= tol * (1 + abs(cand)):
                return cand
        x = cand
    return x


def _estimate_digits(x_last: BigReal, x_prev: BigReal, digits: int) -> int:
    delta = abs(x_last - x_prev)
    if delta.is_zero():
        return digits
    est = -floor_log10_abs(delta)
    return max(0, min(digits, est))


def _converged(deltas: list[BigReal], target_digits: int) -> bool:
    if len(deltas) < 3:
        return False
    a, b, c = deltas[-3], deltas[-2], deltas[-1]
    return a >= b >= c and c < Fraction(1, 10 ** target_digits)


def _spread_ok(entries: list[tuple[int, BigReal]], target_digits: int,
               span: int = 4) -> bool:
    """Guard against stop-rule false alarms: a stalled root repeat produces
    one tiny delta inside a cluster that is still wide, so the last few
    roots must also agree to the target before a stop is trusted."""
    if len(entries) < span:
        return False
    xs = [r for _, r in entries[-span:]]
    spread = max(xs) - min(xs)
    return spread < Fraction(4, 10 ** target_digits)


def _local_roots(problem: HankelProblem, lo: BigReal, hi: BigReal,
                 digits: int, points: int = 13,
                 tol_digits: int | None = None) -> list[BigReal]:
    """All roots in [lo, hi] visible to a dip-aware value grid.

    Plain sign scans miss the tightly-spaced root pairs these sequences
    produce as they collapse onto their limit.  A same-sign |H| dip between
    grid points flags a candidate pair: the dip bottom is localized by
    golden-section search, and if H changes sign there the two enclosed
    roots are recovered on either side.
    """
    step = (hi - lo) / (points - 1)
    grid = []
    for i in range(points):
        x = lo + step * i
        v = _eval_value(problem, x)
        grid.append(None if v is None else (x, v))
    roots: list[BigReal] = []

    def _refine(a, b):
        try:
            roots.append(refine_root(problem, (a + b) / 2, bracket=(a, b),
                                     digits=digits, tol_digits=tol_digits))
        except RootLostError:
            pass

    for gp, gn in zip(grid, grid[1:]):
        if gp is None or gn is None:
            continue
        (x0, v0), (x1, v1) = gp, gn
        if v0.is_zero():
            roots.append(x0)
            continue
        if (v0 < 0) != (v1 < 0):
            _refine(x0, x1)
    # dip hunt: interior |H| minimum flanked by same-sign values
    for i in range(1, len(grid) - 1):
        if grid[i - 1] is None or grid[i] is None or grid[i + 1] is None:
            continue
        (xa, va), (xb, vb), (xc, vc) = grid[i - 1], grid[i], grid[i + 1]
        if vb.is_zero() or (va < 0) != (vb < 0) or (vb < 0) != (vc < 0):
            continue
        if abs(vb) < abs(va) and abs(vb) < abs(vc):
            xm, vm = _dip_bottom(problem, xa, xb, xc, digits)
            if vm is None:
                continue
            if vm.is_zero():
                roots.append(xm)
            elif (vm < 0) != (vb < 0):
                _refine(xa, xm)
                _refine(xm, xc)
    return roots


def _dip_bottom(problem: HankelProblem, a: BigReal, b: BigReal, c: BigReal,
                digits: int, iters: int = 60):
    """Golden-section minimum of |H| inside (a, c), starting from interior
    point b; stops early once the sign of H flips at a trial point."""
    shrink = BigReal(Fraction(3819660112501052, 10 ** 16), digits)  # 2-phi
    fb = _eval_value(problem, b)
    if fb is None:
        return None, None
    ref_neg = fb < 0
    lo, hi = a, c
    x, fx = b, fb
    for _ in range(iters):
        if hi - x > x - lo:
            t = x + (hi - x) * shrink
        else:
            t = x - (x - lo) * shrink
        ft = _eval_value(problem, t)
        if ft is None:
            return None, None
        if ft.is_zero() or (ft < 0) != ref_neg:
            return t, ft
        if abs(ft) < abs(fx):
            if t > x:
                lo = x
            else:
                hi = x
            x, fx = t, ft
        else:
            if t > x:
                hi = t
            else:
                lo = t
        if hi - lo <= (abs(x) + 1) * Fraction(1, 10 ** (digits - 8)):
            break
    return x, fx


def _advance_root(problem: HankelProblem, history: list[BigReal],
                  digits: int, tol_digits: int | None = None):
    """Root of `problem` nearest to the last tracked root, or None.

    The seed extrapolates the recent root motion (sequences approach their
    limit roughly geometrically, often with alternating sign).  A short
    Newton run handles the common case of a simple, slowly-moving root; on
    failure, an expanding window around the previous root is swept with the
    pair-aware local finder and the nearest root wins.
    """
    prev = BigReal(history[-1], digits)
    scale = 1 + abs(prev)
    seed = prev
    target = prev
    prev_delta = None
    if len(history) >= 2:
        t1 = prev - BigReal(history[-2], digits)
        prev_delta = abs(t1)
        if len(history) >= 3 and not prev_delta.is_zero():
            t2 = BigReal(history[-2], digits) - BigReal(history[-3], digits)
            if not t2.is_zero():
                ratio = t1 / t2
                if abs(ratio) < Fraction(9, 10):
                    # geometric estimate of the sequence limit; roots
                    # nearest to it are the innermost cluster members
                    target = prev + t1 * (ratio / (1 - ratio))
                    seed = target
    if prev_delta is not None and not prev_delta.is_zero():
        trust = prev_delta * 8 + scale * Fraction(1, 10 ** 9)
        window = prev_delta * 6 + scale * Fraction(1, 10 ** 9)
    else:
        trust = scale * Fraction(1, 20)
        window = scale * Fraction(1, 100)
    try:
        root = refine_root(problem, seed, digits=digits, max_iter=8,
                           tol_digits=tol_digits)
        if abs(root - prev) <= trust:
            return root
    except RootLostError:
        pass
    for _ in range(14):
        roots = _local_roots(problem, prev - window, prev + window, digits,
                             tol_digits=tol_digits)
        if roots:
            return min(roots, key=lambda r: abs(r - target))
        if window > scale:
            break
        window = window * 4
    return None


def track_sequence(problem: HankelProblem, seed, Dmin: int, Dmax: int,
                   target_digits: int = 10,
                   digits: int | None = None,
                   stop_on_converged: bool = False,
                   early_abort: tuple[int, Fraction] | None = None) -> RootSequence:
    """Track one root from Dmin to Dmax, refining each step from the
    previous dimension's root; drift or loss is recorded, not raised.

    ``early_abort=(span, rel)`` stops after `span` dimensions if the last
    delta still exceeds `rel * (1+|x|)` (cheap rejection of transient roots
    that will never converge)."""
    if Dmin < 1:
        raise ValueError("Dmin must be >= 1")
    entries: list[tuple[int, BigReal]] = []
    deltas: list[BigReal] = []
    status = STATUS_DRIFTING
    # the seed is not a tracked root: it feeds the first step only, so the
    # trust/window heuristics start from their defaults
    history: list[BigReal] = [seed if isinstance(seed, BigReal)
                              else BigReal(seed, digits or digits_for_dimension(Dmin))]
    tol_digits = 2 * target_digits + 24
    for D in range(Dmin, Dmax + 1):
        prob = problem.with_dimension(D)
        dd = digits or digits_for_dimension(D)
        root = _advance_root(prob, history, dd, tol_digits=tol_digits)
        if root is None:
            if not entries:
                raise RootLostError("no root found near the seed")
            status = STATUS_LOST
            break
        if entries:
            deltas.append(abs(root - BigReal(entries[-1][1], dd)))
        entries.append((D, root))
        if not entries or len(entries) == 1:
            history = [root]
        else:
            history.append(root)
        if len(history) > 4:
            history.pop(0)
        if stop_on_converged and _converged(deltas, target_digits) \
                and _spread_ok(entries, target_digits):
            break
        if early_abort is not None and deltas \
                and D - Dmin + 1 >= early_abort[0] \
                and deltas[-1] > (1 + abs(root)) * early_abort[1]:
            break
    if status != STATUS_LOST and _converged(deltas, target_digits):
        status = STATUS_CONVERGED
    est = (_estimate_digits(entries[-1][1], entries[-2][1],
                            entries[-1][1].digits)
           if len(entries) >= 2 else 0)
    return RootSequence(
        problem=problem.with_dimension(entries[-1][0]),
        entries=entries,
        converged=entries[-1][1] if status == STATUS_CONVERGED else None,
        est_correct_digits=est,
        status=status,
    )


def _dedupe_values(roots: list[BigReal],
                   rel: Fraction = Fraction(1, 10 ** 6)) -> list[BigReal]:
    out: list[BigReal] = []
    for r in sorted(roots, key=float):
        if out and abs(r - out[-1]) <= (abs(r) + 1) * BigReal(rel, r.digits):
            continue
        out.append(r)
    return out


def critical_parameters(potential: PotentialSpec, geometry: GeometrySpec,
                        ansatz: str, n_max: int, D_max: int,
                        d: int = 0,
                        D_scan: int | None = None,
                        target_digits: int = 10,
                        digits: int | None = None,
                        window_cap: float = 1e6,
                        stop_on_converged: bool = True) -> list[RootSequence]:
    """Threshold criticals: fix E = 0 and follow roots of H(v0) = 0.

    Scans an expanding v0 window (geometric growth from [0, 2]), escalating
    the scan dimension when a window sweep finds too few roots, tracks every
    discovered root to D_max, orders converged sequences by v0 and labels
    them n = 1, 2, ...  Non-converged sequences are returned unlabeled after
    the converged ones.
    """
    base = HankelProblem(potential, geometry, ansatz, 1, d, "v0", Fraction(0))
    D0 = D_scan or min(D_max, max(8, n_max + 4))
    sequences: list[RootSequence] = []
    tried: list[BigReal] = []

    def _track_new(seeds, D_found, hi_bound):
        for seed in seeds:
            # cluster members within a couple percent collapse onto the
            # same critical; one representative track is enough
            if any(abs(seed - t) <= (abs(seed) + 1) * Fraction(1, 50)
                   for t in tried):
                continue
            tried.append(seed)
            try:
                seq = track_sequence(base, seed, D_found, D_max,
                                     target_digits=target_digits,
                                     digits=digits,
                                     stop_on_converged=stop_on_converged,
                                     early_abort=(6, Fraction(1, 100)))
            except RootLostError:
                continue
            if float(seq.last_root) < 0 \
                    or float(seq.last_root) > 2 * float(hi_bound):
                continue    # wandered outside the scanned depth range
            sequences.append(seq)

    def _n_candidates():
        limits: list[BigReal] = []
        for s in sequences:
            if s.status == STATUS_LOST or s.est_correct_digits < 4:
                continue
            if any(abs(s.last_root - x) <= (abs(x) + 1) * Fraction(1, 1000)
                   for x in limits):
                continue
            limits.append(s.last_root)
        return len(limits)

    for D_try in (D0, min(D_max, D0 + 4), min(D_max, D0 + 8)):
        scan_digits = digits or digits_for_dimension(D_try)
        prob = base.with_dimension(D_try)
        lo, hi = Fraction(0), Fraction(2)
        while True:
            # the determinant vanishes to high order at v0 = 0; keep a
            # margin so its noise roots do not flood the candidate list
            eps = (hi - lo) / 50 if lo == 0 else Fraction(0)
            seeds = _local_roots(prob, BigReal(lo + eps, scan_digits),
                                 BigReal(hi, scan_digits), scan_digits,
                                 points=192)
            _track_new(sorted(seeds, key=float), D_try, hi)
            if _n_candidates() >= n_max or float(hi) >= window_cap:
                break
            lo, hi = hi, hi * 2
        if _n_candidates() >= n_max:
            break
    # drop duplicates that merged to the same limit
    kept: list[RootSequence] = []
    for seq in sorted(sequences, key=lambda s: float(s.last_root)):
        if kept and abs(seq.last_root - kept[-1].last_root) \
                <= (abs(seq.last_root) + 1) * BigReal(Fraction(1, 10 ** 8),
                                                      seq.last_root.digits):
            if seq.status == STATUS_CONVERGED \
                    and kept[-1].status != STATUS_CONVERGED:
                kept[-1] = seq
            continue
        kept.append(seq)
    converged = [s for s in kept if s.status == STATUS_CONVERGED][:n_max]
    rest = [s for s in kept if s.status != STATUS_CONVERGED]
    for i, seq in enumerate(converged, start=1):
        seq.label = i
    return converged + rest[: max(0, n_max - len(converged))]


def merged_parity_criticals(potential: PotentialSpec, ansatz: str,
                            n_max: int, D_max: int,
                            **kwargs) -> list[RootSequence]:
    """Union of the even- and odd-state critical ladders of a 1D well,
    ordered by depth and relabeled n = 1, 2, ...

    The physical criticals of a parity-invariant well alternate parity, so
    reproducing a full table column takes both s = 0 and s = 1 runs for
    wells (like the Gaussian) whose two ladders appear separately.
    """
    seqs = []
    for s in (0, 1):
        seqs.extend(critical_parameters(potential, GeometrySpec.parity(s),
                                        ansatz, n_max, D_max, **kwargs))
    converged = [s for s in seqs if s.status == STATUS_CONVERGED]
    converged.sort(key=lambda s: float(s.last_root))
    deduped: list[RootSequence] = []
    for seq in converged:
        if deduped and abs(seq.last_root - deduped[-1].last_root) \
                <= (abs(seq.last_root) + 1) * BigReal(Fraction(1, 10 ** 8),
                                                      seq.last_root.digits):
            continue
        deduped.append(seq)
    for i, seq in enumerate(deduped[:n_max], start=1):
        seq.label = i
    return deduped[:n_max]


def eigenvalue_bracket(potential: PotentialSpec, geometry: GeometrySpec,
                       v0, state: int, D_max: int,
                       D_scan: int = 12,
                       target_digits: int = 10,
                       digits: int | None = None) -> EigenBracket:
    """Bracket eigenvalue `state` (0-based, ordered by energy) between the
    d=1 (lower) and d=0 (upper) f-ansatz root sequences."""
    v0 = Fraction(v0) if not isinstance(v0, (BigReal, Fraction)) else v0
    scan_digits = digits or digits_for_dimension(D_scan)
    prob0 = HankelProblem(potential, geometry, "f", D_scan, 0, "E", v0)
    brackets = scan_sign_changes(prob0, -v0, Fraction(-1, 10 ** 6), 256,
                                 digits=scan_digits)
    roots = []
    for blo, bhi in brackets:
        try:
            roots.append(refine_root(prob0, (blo + bhi) / 2,
                                     bracket=(blo, bhi), digits=scan_digits))
        except RootLostError:
            continue
    roots = _dedupe_values(roots)
    if state >= len(roots):
        raise RootLostError(
            f"state {state} not bound at v0 = {v0} (found {len(roots)} roots)")
    seed = roots[state]
    seqs = {}
    for d in (0, 1):
        base = HankelProblem(potential, geometry, "f", D_scan, d, "E", v0)
        seqs[d] = track_sequence(base, seed, D_scan, D_max,
                                 target_digits=target_digits, digits=digits)
    return EigenBracket(
        lower=seqs[1].last_root,
        upper=seqs[0].last_root,
        state=state,
        lower_seq=seqs[1],
        upper_seq=seqs[0],
    )


def spurious_scan(potential: PotentialSpec, geometry: GeometrySpec,
                  v0, D: int, d: int, window,
                  grid_points: int = 512,
                  digits: int | None = None) -> list[tuple[BigReal, str]]:
    """All sign-change roots in the window, labeled physical/spurious by
    proximity (relative distance < 1e-3) to cataloged reference values;
    roots with no nearby reference value stay 'unlabeled'."""
    from . import reference

    digits = digits or digits_for_dimension(D)
    prob = HankelProblem(potential, geometry, "f", D, d, "E", Fraction(v0))
    brackets = scan_sign_changes(prob, window[0], window[1], grid_points,
                                 digits=digits)
    known = reference.known_roots(potential, geometry, Fraction(v0))
    out = []
    for blo, bhi in brackets:
        try:
            root = refine_root(prob, (blo + bhi) / 2, bracket=(blo, bhi),
                               digits=digits)
        except RootLostError:
            continue
        label = "unlabeled"
        for value, kind in known:
            ref = BigReal(value, digits)
            if abs(root - ref) < abs(ref) * BigReal(Fraction(1, 1000), digits):
                label = kind
                break
        out.append((root, label))
    return out
