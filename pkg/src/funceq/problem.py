"""Functional equation instances sum_i a_i f(alpha_i x + beta_i y) = c * sum_l x^l y^(p-l)."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ProblemFileError
from .tower import FieldElement, Tower

MODES = ("alpha", "beta", "full")


@dataclass(frozen=True)
class ProblemSpec:
    """One equation instance; c is normalized to 1 throughout."""

    tower: Tower
    a: tuple
    alpha: tuple
    beta: tuple | None = None
    p: int = 1
    bounds: tuple | None = None
    mode: str = "alpha"
    factor_bounds: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        object.__setattr__(self, "alpha", tuple(self.alpha))
        if self.beta is not None:
            object.__setattr__(self, "beta", tuple(self.beta))
        if self.bounds is None:
            object.__setattr__(self, "bounds", (2,) * self.tower.k)
        object.__setattr__(self, "bounds", tuple(self.bounds))
        if self.factor_bounds is None:
            object.__setattr__(self, "factor_bounds", (1,) * self.p)
        object.__setattr__(self, "factor_bounds", tuple(self.factor_bounds))
        self.validate()

    @property
    def n(self):
        return len(self.a)

    def validate(self):
        if self.n < 1:
            raise ProblemFileError("a", "need at least one term")
        if len(self.alpha) != self.n:
            raise ProblemFileError("alpha", f"length {len(self.alpha)} does not match n = {self.n}")
        if self.beta is not None and len(self.beta) != self.n:
            raise ProblemFileError("beta", f"length {len(self.beta)} does not match n = {self.n}")
        if all(x.is_zero() for x in self.a):
            raise ProblemFileError("a", "all coefficients are zero")
        if self.p < 1:
            raise ProblemFileError("p", "degree must be at least 1")
        if self.mode not in MODES:
            raise ProblemFileError("mode", f"expected one of {', '.join(MODES)}")
        if self.mode in ("beta", "full") and self.beta is None:
            raise ProblemFileError("beta", f"mode {self.mode!r} needs the beta list")
        if len(self.bounds) != self.tower.k or any(b < 0 for b in self.bounds):
            raise ProblemFileError("bounds", f"need {self.tower.k} nonnegative entries")
        if len(self.factor_bounds) != self.p or any(b < 0 for b in self.factor_bounds):
            raise ProblemFileError("factor_bounds", f"need {self.p} nonnegative entries")
        for name in ("a", "alpha", "beta"):
            vals = getattr(self, name) or ()
            for x in vals:
                if not isinstance(x, FieldElement) or (x.tower is not self.tower and x.tower != self.tower):
                    raise ProblemFileError(name, "entries must be elements of the problem tower")

    def sides(self):
        """[(side name, parameters)] for the rows the mode asks for."""
        out = []
        if self.mode in ("alpha", "full"):
            out.append(("alpha", self.alpha))
        if self.mode in ("beta", "full"):
            out.append(("beta", self.beta))
        return out

    def params(self, side):
        return self.alpha if side == "alpha" else self.beta

    def replace(self, **changes):
        data = {f: getattr(self, f) for f in
                ("tower", "a", "alpha", "beta", "p", "bounds", "mode", "factor_bounds")}
        data.update(changes)
        return ProblemSpec(**data)


@dataclass
class Problem:
    """A loaded problem file: the equation plus search options."""

    spec: ProblemSpec
    candidates: list = field(default_factory=list)
    degree_cap: int = 1
    diagonal: bool = False
    regularity: object = None
