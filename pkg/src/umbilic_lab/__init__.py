"""umbilic-lab: curvature of immersed submanifolds and umbilic-point checks."""

from .ambient import (AmbientSpace, CartanAuditReport, CurvatureSample,
                      MetricSignature, cartan_audit, christoffel, exp_map,
                      geodesic, k_difference_identity, riemann,
                      sectional_curvature, tg_patch)
from .catalog import CatalogEntry, list_catalog, load_immersion, load_metric, resolve
from .immersion import (Immersion, ShapeReport, frames, is_umbilic,
                        normal_curvature, second_fundamental_form, shape_report)
from .slicer import (SliceResult, SliceSpec, build_slice, fit_hyperbolic,
                     fit_sphere, identity_check, make_slice_spec, slice_shape,
                     trace_slice)

__version__ = "0.1.0"
