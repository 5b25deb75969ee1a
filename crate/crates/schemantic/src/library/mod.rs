//! Shipped rule library and the reasoning pipeline.

mod builtin;
mod pipeline;

pub use builtin::{
    builtin_annotations, builtin_preprocessing, load_rule_dir, AnnotationRuleFile,
    BuiltinRuleSet, GuardedRule, LibraryError,
};
pub use pipeline::{run_pipeline, PipelineError, PipelineOutput};
