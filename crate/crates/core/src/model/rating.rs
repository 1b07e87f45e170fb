use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use super::ModelError;

/// Automotive Safety Integrity Level, ordered `QM < A < B < C < D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AsilLevel {
    Qm,
    A,
    B,
    C,
    D,
}

impl AsilLevel {
    pub const ALL: [AsilLevel; 5] = [AsilLevel::Qm, AsilLevel::A, AsilLevel::B, AsilLevel::C, AsilLevel::D];

    /// Short cell form: `QM`, `A` .. `D`.
    pub fn code(&self) -> &'static str {
        match self {
            AsilLevel::Qm => "QM",
            AsilLevel::A => "A",
            AsilLevel::B => "B",
            AsilLevel::C => "C",
            AsilLevel::D => "D",
        }
    }

    /// Long form: `QM` or `ASIL A` .. `ASIL D`.
    pub fn label(&self) -> String {
        match self {
            AsilLevel::Qm => "QM".to_string(),
            other => format!("ASIL {}", other.code()),
        }
    }
}

pub fn compare_asil(a: AsilLevel, b: AsilLevel) -> Ordering {
    a.cmp(&b)
}

impl fmt::Display for AsilLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for AsilLevel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "QM" => Ok(AsilLevel::Qm),
            "A" => Ok(AsilLevel::A),
            "B" => Ok(AsilLevel::B),
            "C" => Ok(AsilLevel::C),
            "D" => Ok(AsilLevel::D),
            _ => Err(ModelError::InvalidAsil(s.to_string())),
        }
    }
}

/// Common behaviour of the three risk-parameter scales.
pub trait RiskClass: Copy + Ord + fmt::Debug + fmt::Display {
    /// Letter used in the text forms (`S`, `E`, `C`).
    const PREFIX: char;
    /// Largest class on the scale.
    const MAX: u8;

    fn new(value: u8) -> Result<Self, ModelError>;
    fn value(&self) -> u8;

    /// Parses `S2`, `E4`, `C0` and so on.
    fn parse_code(text: &str) -> Result<Self, ModelError> {
        let digits = text.strip_prefix(Self::PREFIX).ok_or_else(|| ModelError::InvalidClass(text.to_string()))?;
        if digits.len() != 1 || !digits.as_bytes()[0].is_ascii_digit() {
            return Err(ModelError::InvalidClass(text.to_string()));
        }
        Self::new(digits.as_bytes()[0] - b'0')
    }

    fn all() -> Vec<Self> {
        (0..=Self::MAX).map(|v| Self::new(v).expect("in range")).collect()
    }
}

macro_rules! risk_class {
    ($(#[$meta:meta])* $name:ident, $prefix:literal, $max:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(u8);

        impl RiskClass for $name {
            const PREFIX: char = $prefix;
            const MAX: u8 = $max;

            fn new(value: u8) -> Result<Self, ModelError> {
                if value <= $max {
                    Ok(Self(value))
                } else {
                    Err(ModelError::ClassOutOfRange { class: $prefix, value, max: $max })
                }
            }

            fn value(&self) -> u8 {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{}", $prefix, self.0)
            }
        }

        impl FromStr for $name {
            type Err = ModelError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                Self::parse_code(s)
            }
        }
    };
}

risk_class!(
    /// Severity class S0..S3.
    Severity, 'S', 3
);
risk_class!(
    /// Exposure class E0..E4.
    Exposure, 'E', 4
);
risk_class!(
    /// Controllability class C0..C3.
    Controllability, 'C', 3
);

/// A class on one of the risk scales together with its justification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rating<C> {
    pub class: C,
    pub rationale: String,
}

impl<C: RiskClass> Rating<C> {
    /// Nonzero classes are claims and must carry a rationale.
    pub fn new(class: C, rationale: impl Into<String>) -> Result<Self, ModelError> {
        let rating = Self { class, rationale: rationale.into() };
        if rating.lacks_rationale() {
            return Err(ModelError::MissingRationale(class.to_string()));
        }
        Ok(rating)
    }

    pub fn lacks_rationale(&self) -> bool {
        self.class.value() > 0 && self.rationale.trim().is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asil_order() {
        assert_eq!(compare_asil(AsilLevel::Qm, AsilLevel::A), Ordering::Less);
        assert_eq!(compare_asil(AsilLevel::D, AsilLevel::B), Ordering::Greater);
        assert_eq!(compare_asil(AsilLevel::C, AsilLevel::C), Ordering::Equal);
        let mut sorted = AsilLevel::ALL;
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, AsilLevel::ALL);
    }

    #[test]
    fn asil_text() {
        for level in AsilLevel::ALL {
            assert_eq!(level.code().parse::<AsilLevel>().unwrap(), level);
        }
        assert_eq!(AsilLevel::D.label(), "ASIL D");
        assert_eq!(AsilLevel::Qm.label(), "QM");
        assert!("E".parse::<AsilLevel>().is_err());
    }

    #[test]
    fn class_ranges() {
        assert!(Severity::new(3).is_ok());
        assert!(Severity::new(4).is_err());
        assert!(Exposure::new(4).is_ok());
        assert!(Exposure::new(5).is_err());
        assert!(Controllability::new(4).is_err());
        assert_eq!("S2".parse::<Severity>().unwrap().value(), 2);
        assert!("S4".parse::<Severity>().is_err());
        assert!("E2".parse::<Severity>().is_err());
        assert!("S".parse::<Severity>().is_err());
        assert!("S12".parse::<Severity>().is_err());
        assert_eq!(Severity::all().len(), 4);
        assert_eq!(Exposure::all().len(), 5);
    }

    #[test]
    fn rationale_required_for_nonzero_class() {
        assert!(Rating::new(Severity::new(0).unwrap(), "").is_ok());
        assert!(Rating::new(Severity::new(1).unwrap(), "  ").is_err());
        assert!(Rating::new(Exposure::new(2).unwrap(), "daily").is_ok());
    }
}
