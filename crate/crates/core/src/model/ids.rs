use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// Returns true if `text` matches `[A-Za-z_][A-Za-z0-9_-]*`.
pub fn is_identifier(text: &str) -> bool {
    let mut chars = text.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

macro_rules! identifier {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(text: &str) -> Result<Self, ModelError> {
                if is_identifier(text) {
                    Ok(Self(text.to_string()))
                } else {
                    Err(ModelError::InvalidIdentifier(text.to_string()))
                }
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::new(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }
    };
}

identifier!(
    /// Identifier of an operating mode.
    ModeId
);
identifier!(
    /// Identifier of a function extracted from the item definition.
    FunctionId
);
identifier!(
    /// Identifier of an element node in the item's element graph.
    ElementId
);
identifier!(
    /// Identifier of a HAZOP guide word.
    GuideWordId
);
identifier!(
    /// Identifier of an operational scenario.
    ScenarioId
);
identifier!(
    /// Name of a numeric item parameter.
    ParamName
);

/// Identifier of a hazardous-scenario row: a decimal stem plus an optional
/// single lowercase suffix letter (`37`, `37a`).
///
/// Ordering is by stem first; the bare stem sorts before any suffixed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EntryId {
    stem: u32,
    suffix: Option<char>,
}

impl EntryId {
    pub fn new(stem: u32, suffix: Option<char>) -> Result<Self, ModelError> {
        if stem == 0 {
            return Err(ModelError::InvalidEntryId(format!("{stem}: stem must be positive")));
        }
        if let Some(c) = suffix {
            if !c.is_ascii_lowercase() {
                return Err(ModelError::InvalidEntryId(format!("{stem}{c}: suffix must be a lowercase letter")));
            }
        }
        Ok(Self { stem, suffix })
    }

    pub fn stem(&self) -> u32 {
        self.stem
    }

    pub fn suffix(&self) -> Option<char> {
        self.suffix
    }

    /// The unsuffixed id sharing this id's stem.
    pub fn bare(&self) -> EntryId {
        EntryId { stem: self.stem, suffix: None }
    }
}

/// Parses the canonical text form of an entry id.
pub fn parse_entry_id(text: &str) -> Result<EntryId, ModelError> {
    let malformed = |why: &str| ModelError::InvalidEntryId(format!("{text:?}: {why}"));
    if text.is_empty() {
        return Err(malformed("empty"));
    }
    let digits_end = text.find(|c: char| !c.is_ascii_digit()).unwrap_or(text.len());
    let (digits, rest) = text.split_at(digits_end);
    if digits.is_empty() {
        return Err(malformed("digits must come first"));
    }
    if digits.len() > 1 && digits.starts_with('0') {
        return Err(malformed("leading zeros"));
    }
    let stem: u32 = digits.parse().map_err(|_| malformed("stem out of range"))?;
    let mut rest = rest.chars();
    let suffix = rest.next();
    if rest.next().is_some() {
        return Err(malformed("suffix must be a single letter"));
    }
    match suffix {
        Some(c) if !c.is_ascii_lowercase() => Err(malformed("suffix must be a lowercase letter")),
        _ => EntryId::new(stem, suffix).map_err(|_| malformed("stem must be positive")),
    }
}

/// Total order on entry ids: stem, then no suffix before `a` before `b`.
pub fn compare_entry_ids(a: &EntryId, b: &EntryId) -> Ordering {
    a.stem.cmp(&b.stem).then_with(|| a.suffix.cmp(&b.suffix))
}

impl Ord for EntryId {
    fn cmp(&self, other: &Self) -> Ordering {
        compare_entry_ids(self, other)
    }
}

impl PartialOrd for EntryId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for EntryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.stem)?;
        if let Some(c) = self.suffix {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for EntryId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_entry_id(s)
    }
}

/// Safety goal identifier, `SG01` through `SG99`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GoalId(u8);

impl GoalId {
    pub fn new(number: u8) -> Result<Self, ModelError> {
        if (1..=99).contains(&number) {
            Ok(Self(number))
        } else {
            Err(ModelError::InvalidGoalId(format!("SG{number:02}")))
        }
    }

    pub fn number(&self) -> u8 {
        self.0
    }
}

impl fmt::Display for GoalId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SG{:02}", self.0)
    }
}

impl FromStr for GoalId {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ModelError::InvalidGoalId(s.to_string());
        let digits = s.strip_prefix("SG").ok_or_else(bad)?;
        if digits.len() != 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let number: u8 = digits.parse().map_err(|_| bad())?;
        GoalId::new(number).map_err(|_| bad())
    }
}
