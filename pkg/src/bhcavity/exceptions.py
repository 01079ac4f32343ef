class BHCavityError(Exception):
    pass


class UnknownFormatError(BHCavityError):
    pass


class UnknownBackendError(BHCavityError):
    pass


class BandStructureError(BHCavityError):
    pass


class WannierError(BHCavityError):
    pass


class OverlapQuadratureError(BHCavityError):
    pass


class SpecMismatchError(BHCavityError):
    pass


class BasisTooLargeError(BHCavityError):
    pass


class EigenSolverError(BHCavityError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CheckpointError(BHCavityError):
    pass


class UnusableCoefficientsError(BHCavityError):
    pass


class MissingCorrelationsError(BHCavityError):
    pass


class FitError(BHCavityError):
    pass


class StageError(BHCavityError):
    def __init__(self, stage, cause):
        super().__init__(stage, cause)
        self.stage = stage
        self.cause = cause

    def __str__(self):
        return 'Stage "%s" failed: %s' % (self.stage, self.cause)


class SweepPointError(BHCavityError):
    def __init__(self, stage, j_over_u, cause):
        super().__init__(stage, j_over_u, cause)
        self.stage = stage
        self.j_over_u = j_over_u
        self.cause = cause

    def __str__(self):
        return 'Stage "%s" failed at J/U=%r: %s' % (self.stage, self.j_over_u, self.cause)
