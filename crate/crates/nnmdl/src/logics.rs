//! Logic specifications: sets of neighbourhood frame conditions.
//!
//! A specification is a set of condition letters `E M C N T D P Q`. Letters
//! implied by others are added by closure, specifications that combine `N`
//! with `Q` or `M` with `Q` are rejected, and each equivalence class is named
//! by its smallest member.

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// A frame condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    E,
    M,
    C,
    N,
    T,
    D,
    P,
    Q,
}

/// All letters in their conventional order.
pub const LETTERS: [Letter; 8] = [
    Letter::E,
    Letter::M,
    Letter::C,
    Letter::N,
    Letter::T,
    Letter::D,
    Letter::P,
    Letter::Q,
];

impl Letter {
    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    pub fn as_char(self) -> char {
        "EMCNTDPQ".as_bytes()[self as usize] as char
    }

    pub fn from_char(c: char) -> Option<Letter> {
        LETTERS
            .iter()
            .copied()
            .find(|l| l.as_char() == c.to_ascii_uppercase())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A set of letters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letters(u8);

impl Letters {
    pub fn empty() -> Letters {
        Letters(0)
    }

    pub fn from_bits(bits: u8) -> Letters {
        Letters(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn contains(self, l: Letter) -> bool {
        self.0 & l.bit() != 0
    }

    pub fn with(self, l: Letter) -> Letters {
        Letters(self.0 | l.bit())
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_superset(self, other: Letters) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        LETTERS.into_iter().filter(move |l| self.contains(*l))
    }

    /// Closure under `MD → P`, `ND → P`, `T → P`, `T → D`, `CP → D`, with `E`
    /// added.
    pub fn closure(self) -> Letters {
        use Letter::*;
        let mut s = self.with(E);
        loop {
            let mut next = s;
            let has = |l: Letter| s.contains(l);
            if (has(M) && has(D)) || (has(N) && has(D)) || has(T) {
                next = next.with(P);
            }
            if has(T) || (has(C) && has(P)) {
                next = next.with(D);
            }
            if next == s {
                return s;
            }
            s = next;
        }
    }

    /// Sort key for choosing class representatives: fewer letters first,
    /// then earlier letters first.
    fn rank(self) -> (usize, Vec<Letter>) {
        (self.len(), self.iter().collect())
    }
}

impl fmt::Display for Letters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.iter() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Letters {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        iter.into_iter().fold(Letters::empty(), Letters::with)
    }
}

/// Errors raised when validating a specification.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("unknown condition letter `{0}`")]
    UnknownLetter(char),
    #[error("specification {0} combines N and Q, which no frame satisfies")]
    InconsistentSpec(Letters),
    #[error("specification {0} combines M and Q, which forces every neighbourhood to be empty")]
    TrivializingSpec(Letters),
}

/// A validated logic specification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LogicSpec {
    letters: Letters,
    canonical: Letters,
}

impl LogicSpec {
    /// Validates a letter set. `E` is always added.
    pub fn validate(letters: Letters) -> Result<LogicSpec, LogicError> {
        let letters = letters.with(Letter::E);
        if letters.contains(Letter::N) && letters.contains(Letter::Q) {
            return Err(LogicError::InconsistentSpec(letters));
        }
        if letters.contains(Letter::M) && letters.contains(Letter::Q) {
            return Err(LogicError::TrivializingSpec(letters));
        }
        Ok(LogicSpec {
            letters,
            canonical: representative(letters.closure()),
        })
    }

    /// The letters as given, with `E`.
    pub fn letters(&self) -> Letters {
        self.letters
    }

    /// The representative of the equivalence class.
    pub fn canonical(&self) -> Letters {
        self.canonical
    }

    /// All letters that hold in every frame of this logic.
    pub fn closure(&self) -> Letters {
        self.letters.closure()
    }

    /// Whether the representative contains the letter.
    pub fn has(&self, l: Letter) -> bool {
        self.canonical.contains(l)
    }

    /// The specification named by its representative.
    pub fn canonicalize(&self) -> LogicSpec {
        LogicSpec {
            letters: self.canonical,
            canonical: self.canonical,
        }
    }

    /// Whether every frame of `self` is a frame of `other`.
    pub fn implies(&self, other: &LogicSpec) -> bool {
        self.closure().is_superset(other.closure())
    }

    /// All valid letter sets in the same equivalence class.
    pub fn class_members(&self) -> Vec<Letters> {
        valid_letter_sets()
            .into_iter()
            .filter(|l| l.closure() == self.closure())
            .collect()
    }
}

impl fmt::Display for LogicSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letters)
    }
}

impl FromStr for LogicSpec {
    type Err = LogicError;

    /// Parses a letter string such as `EMCT`; case and order do not matter
    /// and `E` may be omitted.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut letters = Letters::empty();
        for c in s.chars().filter(|c| !c.is_whitespace()) {
            letters = letters.with(Letter::from_char(c).ok_or(LogicError::UnknownLetter(c))?);
        }
        LogicSpec::validate(letters)
    }
}

/// Every letter set containing `E` that passes validation.
pub fn valid_letter_sets() -> Vec<Letters> {
    (0u8..=255)
        .map(Letters::from_bits)
        .filter(|l| l.contains(Letter::E))
        .filter(|l| !(l.contains(Letter::Q) && (l.contains(Letter::N) || l.contains(Letter::M))))
        .collect()
}

fn representative(closure: Letters) -> Letters {
    valid_letter_sets()
        .into_iter()
        .filter(|l| l.closure() == closure)
        .min_by_key(|l| l.rank())
        .expect("a closed set is a member of its own class")
}

/// The canonical specifications, one per equivalence class, ordered by size
/// and then by letters.
pub fn enumerate_pantheon() -> Vec<LogicSpec> {
    let mut reps: Vec<Letters> = valid_letter_sets()
        .into_iter()
        .map(|l| representative(l.closure()))
        .collect();
    reps.sort_by_key(|l| l.rank());
    reps.dedup();
    reps.into_iter()
        .map(|l| LogicSpec {
            letters: l,
            canonical: l,
        })
        .collect()
}
