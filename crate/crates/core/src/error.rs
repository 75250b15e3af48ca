use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid pattern character {found:?} at position {position}")]
    PatternSyntax { position: usize, found: char },
    #[error("invalid word character {found:?} at position {position}")]
    WordSyntax { position: usize, found: char },
    #[error("letter {letter} at position {position} is outside the alphabet of size {alphabet}")]
    LetterOutOfRange {
        position: usize,
        letter: u8,
        alphabet: u8,
    },
    #[error("alphabet size must be between 1 and 10, got {0}")]
    AlphabetSize(usize),
    #[error("non-erasing morphism violated: {0}")]
    NonErasing(&'static str),
    #[error("the empty pattern has no instances at the matcher level")]
    EmptyPattern,
    #[error("square-limited generator had to revise committed position {position} while building length {target}; increase the lookahead")]
    GeneratorBacktrack { position: usize, target: usize },
    #[error("unknown sequence id {0:?}")]
    UnknownSequence(String),
    #[error("unknown check id {0:?}")]
    UnknownCheck(String),
    #[error("invalid parameter {0:?}; expected key=value with key one of n, k, max-len")]
    BadParameter(String),
    #[error("cache i/o error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
