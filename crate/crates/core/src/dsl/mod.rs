//! On-disk formats: the `.item`/`.hara` text language and the semicolon
//! separated hazard table.
//!
//! The text language is line oriented. A statement starts with a keyword in
//! column 1; lines that begin with whitespace continue the previous
//! statement. `#` starts a comment outside strings. Strings are double
//! quoted and accept the escapes `\"`, `\\`, `\n` and `\r`. Identifiers
//! match `[A-Za-z_][A-Za-z0-9_-]*`.
//!
//! ```text
//! item "AFA Logic"
//! element AFALogic primary
//! element Brakes
//! connect AFALogic Brakes
//! mode FollowMode "Follow Mode" automated
//! function Steering "Lateral control" modes [FollowMode]
//! guideword MORE "Excess"
//! scenario HardShoulder "Driving on the hard shoulder"
//!   exposure E4 rationale "Regular operation"
//! param max_speed 12 "km/h"
//! ```
//!
//! ```text
//! hara "AFA Logic HARA" revision 2 kind safety-refinement based-on 1
//! goal SG03 "Steering actuation beyond specification must be prevented." modes [FollowMode] asil D
//! entry 37a mode FollowMode function Steering guideword MORE
//!   malfunction "Steering beyond specification"
//!   scenario HardShoulder
//!   consequence "Vehicle enters the right lane"
//!   S3 "..." E4 "..." C3 "..."
//!   asil D
//!   goal SG03
//! waive function Steering guideword LESS mode FollowMode
//!   rationale "Covered by the tolerance monitor"
//! ```

mod csv;
mod hara;
mod item;
mod lexer;
mod write;

use std::fmt;

pub use self::csv::{parse_csv, write_csv, CSV_HEADER};
pub use hara::parse_hara_file;
pub use item::parse_item_file;
pub use write::{serialize_document, serialize_item};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceLocation {
    pub file: String,
    /// 1-based.
    pub line: usize,
    /// 1-based, in characters.
    pub column: usize,
}

impl fmt::Display for SourceLocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file, self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DiagnosticSeverity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub location: SourceLocation,
    pub message: String,
    pub severity: DiagnosticSeverity,
}

impl ParseDiagnostic {
    pub fn error(location: SourceLocation, message: impl Into<String>) -> Self {
        Self { location, message: message.into(), severity: DiagnosticSeverity::Error }
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            DiagnosticSeverity::Error => "error",
            DiagnosticSeverity::Warning => "warning",
        };
        write!(f, "{}: {level}: {}", self.location, self.message)
    }
}

/// Diagnostics of a failed parse; never empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostics(pub Vec<ParseDiagnostic>);

impl Diagnostics {
    pub fn single(location: SourceLocation, message: impl Into<String>) -> Self {
        Self(vec![ParseDiagnostic::error(location, message)])
    }

    pub fn iter(&self) -> impl Iterator<Item = &ParseDiagnostic> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Diagnostics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Diagnostics {}

/// Decodes raw file contents, reporting the position of invalid UTF-8.
pub fn decode_utf8<'a>(file: &str, bytes: &'a [u8]) -> Result<&'a str, Diagnostics> {
    std::str::from_utf8(bytes).map_err(|err| {
        let valid = &bytes[..err.valid_up_to()];
        // The prefix is valid UTF-8 by construction.
        let prefix = std::str::from_utf8(valid).unwrap_or_default();
        let line = prefix.matches('\n').count() + 1;
        let column = prefix.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        Diagnostics::single(SourceLocation { file: file.to_string(), line, column }, "input is not valid UTF-8")
    })
}
