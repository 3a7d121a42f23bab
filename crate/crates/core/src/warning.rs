use serde::Serialize;

/// Recoverable problems found while turning pages into records. None of
/// these stop ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "warning", rename_all = "snake_case")]
pub enum Warning {
    /// An opening `[[` or `{{` without its closing token.
    Unterminated { token: String, offset: usize },
    UnknownTemplate { template: String },
    DepthExceeded { template: String, max_depth: usize },
    TypeMismatch {
        attribute: String,
        kind: String,
        raw_value: String,
    },
    /// Both doctoral and habilitation flags on one record.
    QualificationConflict { subject: String },
}

impl Warning {
    pub fn kind(&self) -> &'static str {
        match self {
            Warning::Unterminated { .. } => "unterminated",
            Warning::UnknownTemplate { .. } => "unknown_template",
            Warning::DepthExceeded { .. } => "depth_exceeded",
            Warning::TypeMismatch { .. } => "type_mismatch",
            Warning::QualificationConflict { .. } => "qualification_conflict",
        }
    }
}
