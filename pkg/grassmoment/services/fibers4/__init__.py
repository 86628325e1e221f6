"""
Explicit n = 4 fibers: M_Q^7 ⊂ CP^5 and M_Q^5 = M_Q^7 ∩ G_{4,2}
"""
from grassmoment.services.fibers4.bundle import (
    bundle_projection,
    bundle_transition,
    cocycle_residual,
    local_trivialization,
    transition_consistency,
    verify_chart_coverage,
)
from grassmoment.services.fibers4.chart import (
    chart_coords_of,
    complete_intersection_f,
    jacobian,
    jacobian_fd,
    jacobian_rank,
)
from grassmoment.services.fibers4.mq5 import (
    F_param,
    F_preimage,
    G_param,
    G_preimage,
    m2_sample,
    m3_sample,
    mq5_fiber_circles,
    sample_m2,
    sample_mq5,
    surface_residual,
)
from grassmoment.services.fibers4.mq7 import (
    act_rho3,
    h_param,
    h_preimage,
    lift_f,
    mq7_magnitudes,
    rho3,
    rho3_stabilizer_dim,
    s5_orbit_variants,
    sample_mq7,
    to_fiber_normalization,
)
from grassmoment.services.fibers4.orbit import (
    FIRST_ORBIT,
    ORBIT_NAMES,
    SECOND_ORBIT,
    FiberOrbit,
    chamber_fiber_orbits,
    fiber_orbit,
)
from grassmoment.services.fibers4.projections import g_map, g_tilde, hopf_q, phi_line, proj_p
from grassmoment.services.fibers4.tangent import tangent_dimension
from grassmoment.services.fibers4.triangle import (
    curve_Pprime_residual,
    modulus_relation_residual,
    p_prime_feasible,
    solve_triangle_P,
)

__all__ = [
    "FIRST_ORBIT",
    "ORBIT_NAMES",
    "SECOND_ORBIT",
    "FiberOrbit",
    "F_param",
    "F_preimage",
    "G_param",
    "G_preimage",
    "act_rho3",
    "bundle_projection",
    "bundle_transition",
    "chamber_fiber_orbits",
    "chart_coords_of",
    "cocycle_residual",
    "complete_intersection_f",
    "curve_Pprime_residual",
    "fiber_orbit",
    "g_map",
    "g_tilde",
    "h_param",
    "h_preimage",
    "hopf_q",
    "jacobian",
    "jacobian_fd",
    "jacobian_rank",
    "lift_f",
    "local_trivialization",
    "m2_sample",
    "m3_sample",
    "modulus_relation_residual",
    "mq5_fiber_circles",
    "mq7_magnitudes",
    "p_prime_feasible",
    "phi_line",
    "proj_p",
    "rho3",
    "rho3_stabilizer_dim",
    "s5_orbit_variants",
    "sample_m2",
    "sample_mq5",
    "sample_mq7",
    "solve_triangle_P",
    "surface_residual",
    "tangent_dimension",
    "to_fiber_normalization",
    "transition_consistency",
    "verify_chart_coverage",
]
