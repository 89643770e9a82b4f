"""Translation-invariant Gibbs measures of the Potts-SOS model on the Cayley tree."""
from .chain import TransitionKernel, build_kernel, spectrum, stationary_law
from .extremality import ExtremalityVerdict, extremality_verdict, find_threshold, verdicts
from .model import Couplings, ModelParams, activities_from_couplings, hamiltonian
from .tisgm import ClassificationResult, FixedPoint, classify_region, count_on_line, enumerate_tisgm

__version__ = "0.1.0"
