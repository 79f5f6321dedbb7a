"""Exception taxonomy for the toolkit.

Errors split into three families: malformed combinatorial input
(admissibility, homogeneity, shapes), numerical failures inside the
linear algebra layer, and clean mathematical negatives (a feasibility
test that says "no").  The command line maps the last family to exit
code 1 and everything else to exit code 2.
"""


class MomtError(Exception):
    """Base class for all errors raised by this package."""


class NotAdmissible(MomtError):
    """A word set is not suffix closed / a multi-index set is not
    downward closed."""


class NotAdmissiblePair(MomtError):
    """A word set is not compatible with the given homogeneous
    polynomials, so relation checks would be ill posed."""


class SigmaTooLarge(MomtError):
    """Expanding a commutative index set into words would exceed the
    configured cap."""


class ZeroLambda(MomtError):
    """A deformation coefficient is zero; signatures are undefined."""


class NotHomogeneous(MomtError):
    """A polynomial expected to be homogeneous is not."""


class NotSquare(MomtError):
    """An operation requiring square blocks received rectangular ones."""


class NotVectorValued(MomtError):
    """An operation requiring column-vector moments (d_in == 1) received
    wider blocks."""


class DimensionMismatch(MomtError):
    """Matrix arguments have inconsistent shapes."""


class NonConvergence(MomtError):
    """The eigensolver did not reach its target after the sweep limit."""


class NotPSD(MomtError):
    """A matrix required to be positive semidefinite is not (beyond
    tolerance)."""


class NotWellDefined(MomtError):
    """An operator does not descend to the quotient space: it maps
    null vectors of the Gram form to vectors of positive length."""


class InfeasibleMoments(MomtError):
    """Moment data fails the dominance test; no representing row
    contraction exists.  Carries the feasibility report(s)."""

    def __init__(self, *reports):
        self.reports = list(reports)
        super().__init__(_report_message(self.reports))


class NotStarFeasible(MomtError):
    """Moment data fails the kernel equality test; no representing
    *-orbit exists.  Carries the feasibility report(s)."""

    def __init__(self, *reports):
        self.reports = list(reports)
        super().__init__(_report_message(self.reports))


class ToeplitzNotPSD(MomtError):
    """The Toeplitz-type kernel is not positive semidefinite; no
    completely positive representing map exists."""

    def __init__(self, *reports):
        self.reports = list(reports)
        super().__init__(_report_message(self.reports))


class RelationsFail(MomtError):
    """Moment data violates the polynomial relations it is required to
    satisfy.  Carries the relation report and the kernel report."""

    def __init__(self, *reports):
        self.reports = list(reports)
        super().__init__(_report_message(self.reports))


class GammaZeroNotIdentity(MomtError):
    """A completely positive synthesis needs the zeroth moment to be the
    identity."""


class EmbedNotIsometric(MomtError):
    """The canonical embedding of the target space into the quotient is
    not isometric (the zeroth moment is not the identity)."""


class DepthTooSmall(MomtError):
    """A truncation depth is too small for the requested computation."""


class BadKind(MomtError):
    """Unknown instance kind or invalid parameters for it."""


def _report_message(reports):
    parts = []
    for r in reports:
        try:
            parts.append(f"{r.kind}: pass={r.passed} residual={r.residual_norm:.6g}")
        except AttributeError:
            parts.append(str(r))
    return "; ".join(parts) if parts else "infeasible"
