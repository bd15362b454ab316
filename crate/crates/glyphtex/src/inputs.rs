use serde::{Deserialize, Serialize};

/// The three user inputs of a generation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionInputs {
    pub concept: String,
    pub word: String,
    pub letter: String,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InputError {
    #[error("concept must not be empty")]
    EmptyConcept,
    #[error("word must not be empty")]
    EmptyWord,
    #[error("letter must be exactly one character")]
    LetterNotSingle,
    #[error("letter {letter:?} does not occur in word {word:?}")]
    LetterNotInWord { letter: String, word: String },
}

impl InputError {
    /// Name of the offending input field.
    pub fn field(&self) -> &'static str {
        match self {
            InputError::EmptyConcept => "concept",
            InputError::EmptyWord => "word",
            InputError::LetterNotSingle | InputError::LetterNotInWord { .. } => "letter",
        }
    }
}

impl SessionInputs {
    pub fn new(concept: &str, word: &str, letter: &str) -> Result<SessionInputs, InputError> {
        let inputs = SessionInputs { concept: concept.into(), word: word.into(), letter: letter.into() };
        inputs.validate()?;
        Ok(inputs)
    }

    pub fn validate(&self) -> Result<(), InputError> {
        if self.concept.trim().is_empty() {
            return Err(InputError::EmptyConcept);
        }
        if self.word.trim().is_empty() {
            return Err(InputError::EmptyWord);
        }
        let mut chars = self.letter.chars();
        let (Some(letter), None) = (chars.next(), chars.next()) else {
            return Err(InputError::LetterNotSingle);
        };
        let wanted: Vec<char> = letter.to_lowercase().collect();
        let found = self.word.chars().any(|c| c.to_lowercase().eq(wanted.iter().copied()));
        if !found {
            return Err(InputError::LetterNotInWord { letter: self.letter.clone(), word: self.word.clone() });
        }
        Ok(())
    }

    pub fn letter_char(&self) -> char {
        self.letter.chars().next().unwrap_or(' ')
    }
}
