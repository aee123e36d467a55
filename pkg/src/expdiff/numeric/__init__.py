from expdiff.numeric.growth import (
    GrowthReport,
    NumericContext,
    eval_numeric,
    eval_scalar,
    lambda_estimate,
    parse_radii,
    spot_check,
    winding_number,
    zero_count,
)
