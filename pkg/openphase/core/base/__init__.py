from openphase.core.base.config import (DEFAULT_POLICY,
                                        DimensionOverflowException, SizePolicy)
from openphase.core.base.generator import GeneratorException, LindbladGenerator
from openphase.core.base.lattice import (Boundary, LatticeException,
                                         LatticeSpec, Species)
from openphase.core.base.liouville import (DensityMatrix, Ordering,
                                           Superoperator,
                                           SuperoperatorException,
                                           SuperoperatorKind, SuperVector,
                                           build_imag_superop,
                                           build_real_superop, devectorize,
                                           reorder, vectorize)
from openphase.core.base.logger import BaseLogger, DefaultLogger
from openphase.core.base.pauli import (OperatorSum, PauliException,
                                       PauliString, commutes, pauli_mul,
                                       realize)

__all__ = [
    'SizePolicy', 'DEFAULT_POLICY', 'DimensionOverflowException',
    'PauliString', 'OperatorSum', 'PauliException', 'pauli_mul', 'commutes', 'realize',
    'LatticeSpec', 'Boundary', 'Species', 'LatticeException',
    'LindbladGenerator', 'GeneratorException',
    'DensityMatrix', 'SuperVector', 'Superoperator', 'SuperoperatorKind', 'Ordering', 'SuperoperatorException',
    'vectorize', 'devectorize', 'reorder', 'build_imag_superop', 'build_real_superop',
    'BaseLogger', 'DefaultLogger',
]
