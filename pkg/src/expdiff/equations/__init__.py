from expdiff.equations.equation import (
    Constraints,
    Equation,
    PQPair,
    Verdict,
    VerdictTag,
    build_pq,
    classify,
    pq_identity,
    residual,
    verify,
)
from expdiff.equations.solver import (
    OdeInstance,
    SolutionSet,
    SolutionTag,
    T31Instance,
    solve_equation,
    solve_linear_ode_poly,
    solve_theorem31,
    synthesize_v,
)
