from openphase.core.models.corners import (Corner, InterpolationParams,
                                           ModelException, SymmetryReport,
                                           build_corner, build_interpolated,
                                           cluster_state, corner_state,
                                           decohered_cluster_state,
                                           symmetry_report, trivial_mixed_state,
                                           trivial_pure_state)
from openphase.core.models.gibbs import (GibbsSpec, InvalidStabilizerException,
                                         build_stabilizer_gibbs,
                                         cluster_gibbs_spec, gibbs_state,
                                         term_generator)
from openphase.core.models.warmups import (build_amplitude_damping,
                                           build_damped_rabi,
                                           build_single_qubit_mixer,
                                           build_symmetric_product, lowering)

__all__ = [
    'Corner', 'InterpolationParams', 'ModelException', 'SymmetryReport',
    'build_corner', 'build_interpolated', 'symmetry_report',
    'trivial_pure_state', 'cluster_state', 'trivial_mixed_state', 'decohered_cluster_state', 'corner_state',
    'GibbsSpec', 'InvalidStabilizerException', 'build_stabilizer_gibbs', 'cluster_gibbs_spec',
    'gibbs_state', 'term_generator',
    'build_single_qubit_mixer', 'build_symmetric_product', 'build_amplitude_damping', 'build_damped_rabi',
    'lowering',
]
