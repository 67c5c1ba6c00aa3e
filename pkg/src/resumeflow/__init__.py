"""resumeflow: layout-aware resume text linearization, extraction
orchestration, refinement, and evaluation."""

from .doc_model import (
    BoundingBox,
    IndexedDocument,
    IndexedLine,
    LayoutSegment,
    LineRange,
    Source,
    TextPrimitive,
    render_indexed,
    slice_lines,
)
from .evaluation import (
    Alignment,
    EvalConfig,
    FieldKind,
    FieldOutcome,
    MetricsReport,
    SimilarityMatrix,
    Status,
    aggregate,
    build_similarity_matrix,
    entity_similarity,
    evaluate_corpus,
    evaluate_resume,
    hungarian_align,
    match_field,
    string_similarity,
)
from .extract import (
    BasicInfo,
    CompletionBackend,
    DecodeConfig,
    EducationEntry,
    ExtractionTask,
    HttpBackend,
    MockBackend,
    OracleBackend,
    ResumeRecord,
    WorkEntry,
    build_prompt,
    extract_json_block,
    parse_task_output,
    resolve_pointers,
    run_extraction,
)
from .ingest import OcrRegion, PageGeometry, compute_ocr_regions, fuse_content
from .layout import (
    GeometricCutDetector,
    HttpSegmentDetector,
    SegmentDetector,
    WholePageDetector,
    detect_segments_geometric,
    group_lines,
    linearize,
    order_segments,
)
from .pipeline import PipelineConfig, RunManifest, run_e2e
from .refine import (
    NormalizedDate,
    RefineConfig,
    deduplicate,
    normalize_date,
    normalize_org,
    refine,
    verify_source,
)
from .synth import (
    ContentPools,
    LayoutKind,
    ResumeTemplate,
    SynthFixture,
    corrupt,
    default_pools,
    generate,
    linear_template,
    sidebar_template,
    two_column_template,
)

__version__ = "0.1.0"
