//! Builtin example models.

use crate::model::{parse_model, Model, ModelError};

/// Names and JSON sources of the shipped models.
pub const BUILTIN: [(&str, &str); 5] = [
    ("ermog-yeast", include_str!("../models/ermog-yeast.json")),
    ("heck-carbon", include_str!("../models/heck-carbon.json")),
    ("anderies", include_str!("../models/anderies.json")),
    ("defone-cutpair", include_str!("../models/defone-cutpair.json")),
    ("ndk-defone", include_str!("../models/ndk-defone.json")),
];

pub fn builtin_source(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

/// Parses a builtin model; `None` for unknown names.
pub fn builtin(name: &str) -> Option<Result<Model, ModelError>> {
    builtin_source(name).map(parse_model)
}

pub fn names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}
