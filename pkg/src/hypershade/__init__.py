"""Exact contours, terminators and shadow boundaries of implicit hypersurfaces."""

from .poly import (
    VariableSpace,
    Polynomial,
    MonomialOrder,
    LEX,
    GREVLEX,
    BlockOrder,
    block_order,
    embed,
    restrict,
    substitute,
    compose,
    homogenize,
    dehomogenize,
    normalize_primitive,
    divide_exact,
    poly_sqrt,
    to_text,
    SpaceMismatchError,
    ZeroPolynomialError,
)
from .expr import parse_expression, ExpressionError
from .elim import (
    ElimBudget,
    EliminationTask,
    EliminationResult,
    EliminationBudgetError,
    DegenerateSystemError,
    ElimStructureError,
    buchberger,
    normal_form,
    s_polynomial,
    bareiss_determinant,
    sylvester_matrix,
    sylvester_resultant,
    linear_presubstitution,
    eliminate,
    eliminate_groebner,
    dixon_resultant,
)
from .scene import (
    Hypersurface,
    LightSource,
    PerspectiveCamera,
    GridBox,
    SceneDescription,
    TerminatorSystem,
    ShadowBoundarySystem,
    FrameEdge,
    DegeneratePolarError,
    TangencyDegeneracyError,
    ApexAtInfinityError,
    ImproperPointError,
    first_polar,
    terminator_system,
    scene_degree,
    scene_terminator_bound,
    tangent_cone_task,
    tangent_cone,
    shadow_boundary_system,
    perspective_point,
    perspective_image_task,
    perspective_image,
    perspective_terminator_task,
    perspective_terminator,
    perspective_shadow_task,
    perspective_shadow,
    hypercube_frame,
)
from .visibility import (
    IlluminationClass,
    SurfaceSample,
    ClassifiedSample,
    RaySegment,
    ShadingContext,
    LightOnPolarError,
    OffSurfaceSampleError,
    sturm_count,
    polar_side,
    segment_occlusion,
    snap_to_surface,
    on_surface_residual,
    classify_sample,
)
from .mesh import (
    GridSpec,
    ColoredMesh,
    MeshPrecisionError,
    GridError,
    evaluate_grid,
    marching_cubes,
    classify_mesh,
    mesh_residual,
    is_watertight,
    export_mesh,
    export_frame,
    load_obj,
    load_ply,
)
from .scenefile import SceneFileError, parse_scene_text, load_scene

__version__ = "0.1.0"
