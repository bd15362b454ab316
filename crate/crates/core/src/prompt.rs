//! Texture prompt construction.

use alloc::string::String;
use core::fmt;

/// Fixed text placed before the concept.
pub const PROMPT_PREFIX: &str = "Seamless repeating pattern of tiny and small ";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmptyConcept;

impl fmt::Display for EmptyConcept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("concept must not be empty")
    }
}

impl core::error::Error for EmptyConcept {}

/// Prompt for a tileable texture of `concept`. Surrounding whitespace is
/// trimmed; everything else, casing included, is kept verbatim.
pub fn build_prompt(concept: &str) -> Result<String, EmptyConcept> {
    let concept = concept.trim();
    if concept.is_empty() {
        return Err(EmptyConcept);
    }
    let mut prompt = String::with_capacity(PROMPT_PREFIX.len() + concept.len());
    prompt.push_str(PROMPT_PREFIX);
    prompt.push_str(concept);
    Ok(prompt)
}
