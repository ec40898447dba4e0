"""Partial-sum traces and evidence-based convergence verdicts."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

DEFAULT_WINDOW = 8
DEFAULT_BLOWUP = 1e6


@dataclass(frozen=True)
class Verdict:
    """``kind`` is one of converged, diverging, undefined_term, inconclusive."""

    kind: str
    value: Optional[complex] = None
    n_used: Optional[int] = None
    evidence: str = ""
    index: Optional[int] = None
    certified: bool = False

    @classmethod
    def converged(cls, value, n_used, certified, evidence=""):
        return cls("converged", complex(value), n_used, evidence, None, certified)

    @classmethod
    def diverging(cls, evidence):
        return cls("diverging", evidence=evidence)

    @classmethod
    def undefined_term(cls, index, evidence=""):
        return cls("undefined_term", evidence=evidence, index=index)

    @classmethod
    def inconclusive(cls, evidence):
        return cls("inconclusive", evidence=evidence)

    @property
    def label(self) -> str:
        if self.kind == "diverging":
            return "diverging (evidence)"
        if self.kind == "converged" and not self.certified:
            return "converged (non-certified)"
        return self.kind

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        if self.kind == "converged":
            out.update(value=self.value, n_used=self.n_used, certified=self.certified)
        if self.kind == "undefined_term":
            out["index"] = self.index
        if self.evidence:
            out["evidence"] = self.evidence
        return out


@dataclass(frozen=True)
class SeriesDiagnostics:
    terms: tuple
    partial_sums: tuple
    term_ratios: tuple
    verdict: Verdict
    ratio_stride: int = 1
    meta: dict = field(default_factory=dict)

    @property
    def value(self) -> Optional[complex]:
        return self.verdict.value

    @property
    def last(self) -> Optional[complex]:
        return self.partial_sums[-1] if self.partial_sums else None

    def rows(self):
        """``(n, re, im, |term|, ratio)`` per partial sum; ratio is ``None`` where undefined."""
        ratio_at = {}
        for j, r in enumerate(self.term_ratios):
            ratio_at[j * self.ratio_stride] = r
        for n, (t, p) in enumerate(zip(self.terms, self.partial_sums)):
            r = ratio_at.get(n)
            if r is not None and not math.isfinite(r):
                r = None
            yield n, p.real, p.imag, abs(t), r

    def to_csv(self, fh=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "re_partial", "im_partial", "abs_term", "ratio"])
        for n, re, im, at, r in self.rows():
            w.writerow([n, repr(re), repr(im), repr(at), "" if r is None else repr(r)])
        text = buf.getvalue()
        if fh is not None:
            fh.write(text)
        return text

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.to_dict(),
            "metadata": dict(self.meta, terms=len(self.terms), ratio_stride=self.ratio_stride),
        }


def term_ratios(terms: Sequence[complex], stride: int = 1) -> tuple:
    """``|t_{n+stride}| / |t_n|`` over indices ``0, stride, 2*stride, ...``; NaN when ``t_n = 0``."""
    sel = [abs(t) for t in terms[::stride]]
    out = []
    for x, y in zip(sel, sel[1:]):
        out.append(y / x if x else math.nan)
    return tuple(out)


def _envelope(mags, lo, hi):
    best, at = -1.0, lo
    for i in range(lo, hi):
        if mags[i] > best:
            best, at = mags[i], i
    return best, at


def classify(
    terms: Sequence[complex],
    partial: Sequence[complex],
    tol: float,
    tail: Optional[Callable[[int], float]] = None,
    terminates_at: Optional[int] = None,
    window: int = DEFAULT_WINDOW,
    blowup: float = DEFAULT_BLOWUP,
    final: bool = False,
    divergence_checks: bool = True,
    power_law_test: bool = False,
) -> Optional[Verdict]:
    """Verdict for the trace so far, or ``None`` if more terms are needed.

    ``tail(n)`` is a certified bound on the sum of ``|t_j|`` for ``j > n``.
    ``terminates_at`` is the index from which every term is structurally zero.
    With ``final`` set, an undecided trace becomes ``inconclusive``.
    Divergence heuristics wait for ``4 * window`` terms; callers that know the
    series converges switch them off with ``divergence_checks=False``.
    ``power_law_test`` adds the harmonic-type check (terms decaying no faster
    than ``1/n`` with coherent phase); it can misread slow geometric decay, so
    it is opt-in for series whose terms are expected to follow a power law.
    """
    n = len(terms) - 1
    if n < 0:
        return Verdict.inconclusive("empty trace") if final else None
    S = partial[-1]
    if not (math.isfinite(S.real) and math.isfinite(S.imag)):
        return Verdict.diverging(f"non-finite partial sum at n={n}")
    if terminates_at is not None and n >= terminates_at:
        return Verdict.converged(S, n, True, f"all terms from n={terminates_at} vanish")
    step = abs(S - partial[-2]) if n >= 1 else abs(S)
    if tail is not None:
        tb = tail(n)
        if tb <= tol and step <= tol:
            return Verdict.converged(S, n, True, f"tail bound {tb:.3g}")
    base = max(0, n + 1 - 2 * window)
    mags = [0.0] * base + [abs(t) for t in terms[base:]]
    if n + 1 >= 2 * window:
        e_prev, i_prev = _envelope(mags, base, n + 1 - window)
        e_last, i_last = _envelope(mags, n + 1 - window, n + 1)
        sums = [abs(p) for p in partial[n + 1 - window:]]
        judge = divergence_checks and (final or n + 1 >= 4 * window)
        growing = judge and all(b >= a for a, b in zip(sums, sums[1:]))
        if growing and sums[-1] > blowup:
            return Verdict.diverging(f"|partial sum| grew monotonically past {blowup:g} (|S_{n}|={sums[-1]:.3g})")
        if judge and e_last > tol and e_last >= e_prev:
            return Verdict.diverging(f"term envelope not decaying ({e_prev:.3g} -> {e_last:.3g})")
        if power_law_test and judge and e_last > tol and e_prev > 0 and i_last > i_prev:
            beta = math.log(e_prev / e_last) / math.log((i_last + 1) / (i_prev + 1))
            drift = abs(S - partial[n - window])
            mass = sum(mags[n + 1 - window:])
            if beta <= 1.0 + 1e-9 and drift >= 0.5 * mass:
                return Verdict.diverging(
                    f"terms decay like n^-{beta:.3f} with coherent phase (harmonic-type growth)"
                )
        if tail is None and terminates_at is None and e_prev > 0 and e_last < e_prev:
            rho = (e_last / e_prev) ** (1.0 / window)
            est = e_last * rho / (1.0 - rho) if rho < 1 else math.inf
            if est <= tol and step <= tol:
                return Verdict.converged(S, n, False, f"successive partial sums within tol, geometric estimate {est:.3g}")
        if e_prev == 0 and e_last == 0:
            return Verdict.converged(S, n, False, "terms vanished over two windows")
    if final:
        return Verdict.inconclusive(f"undecided after {n + 1} terms (last |term|={mags[-1]:.3g})")
    return None
