use super::{Diagnostics, ParseDiagnostic, SourceLocation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Bare word: keywords, identifiers, numbers, ids, class codes.
    Word(String),
    Str(String),
    LBracket,
    RBracket,
    Comma,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

impl Token {
    pub fn describe(&self) -> String {
        match &self.kind {
            TokenKind::Word(w) => format!("`{w}`"),
            TokenKind::Str(_) => "a string".to_string(),
            TokenKind::LBracket => "`[`".to_string(),
            TokenKind::RBracket => "`]`".to_string(),
            TokenKind::Comma => "`,`".to_string(),
        }
    }
}

/// A statement: its tokens across the head line and continuation lines.
/// Never empty.
#[derive(Debug, Clone)]
pub struct Statement {
    pub tokens: Vec<Token>,
}

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '[' | ']' | ',' | '"' | '#')
}

/// Splits the input into statements. Lexical errors are collected and the
/// offending line skipped.
pub fn statements(file: &str, text: &str) -> Result<Vec<Statement>, Diagnostics> {
    let loc = |line, column| SourceLocation { file: file.to_string(), line, column };
    let mut out: Vec<Statement> = Vec::new();
    let mut errors = Vec::new();

    for (index, raw_line) in text.split('\n').enumerate() {
        let line_no = index + 1;
        let line = raw_line.strip_suffix('\r').unwrap_or(raw_line);
        let chars: Vec<char> = line.chars().collect();
        let mut tokens = Vec::new();
        let mut i = 0;
        let mut failed = false;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            if c.is_whitespace() {
                i += 1;
            } else if c == '#' {
                break;
            } else if c == '[' || c == ']' || c == ',' {
                let kind = match c {
                    '[' => TokenKind::LBracket,
                    ']' => TokenKind::RBracket,
                    _ => TokenKind::Comma,
                };
                tokens.push(Token { kind, line: line_no, column });
                i += 1;
            } else if c == '"' {
                let mut value = String::new();
                let mut j = i + 1;
                let mut closed = false;
                while j < chars.len() {
                    match chars[j] {
                        '"' => {
                            closed = true;
                            j += 1;
                            break;
                        }
                        '\\' => {
                            let escaped = match chars.get(j + 1) {
                                Some('"') => '"',
                                Some('\\') => '\\',
                                Some('n') => '\n',
                                Some('r') => '\r',
                                other => {
                                    let what = other.map_or("end of line".to_string(), |c| format!("`\\{c}`"));
                                    errors.push(ParseDiagnostic::error(
                                        loc(line_no, j + 1),
                                        format!("invalid escape sequence {what}"),
                                    ));
                                    failed = true;
                                    break;
                                }
                            };
                            value.push(escaped);
                            j += 2;
                        }
                        other => {
                            value.push(other);
                            j += 1;
                        }
                    }
                }
                if failed {
                    break;
                }
                if !closed {
                    errors.push(ParseDiagnostic::error(loc(line_no, column), "unterminated string"));
                    failed = true;
                    break;
                }
                tokens.push(Token { kind: TokenKind::Str(value), line: line_no, column });
                i = j;
            } else {
                let start = i;
                while i < chars.len() && is_word_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                tokens.push(Token { kind: TokenKind::Word(word), line: line_no, column });
            }
        }
        if failed || tokens.is_empty() {
            continue;
        }
        let indented = line.starts_with(|c: char| c.is_whitespace());
        if indented {
            match out.last_mut() {
                Some(stmt) => stmt.tokens.extend(tokens),
                None => errors
                    .push(ParseDiagnostic::error(loc(line_no, 1), "continuation line without a statement to continue")),
            }
        } else {
            out.push(Statement { tokens });
        }
    }

    if errors.is_empty() {
        Ok(out)
    } else {
        Err(Diagnostics(errors))
    }
}

pub fn locate(file: &str, token: &Token) -> SourceLocation {
    SourceLocation { file: file.to_string(), line: token.line, column: token.column }
}

/// Sequential reader over one statement's tokens.
pub struct Cursor<'a> {
    file: &'a str,
    tokens: &'a [Token],
    pos: usize,
}

pub type Step<T> = Result<T, ParseDiagnostic>;

impl<'a> Cursor<'a> {
    pub fn new(file: &'a str, stmt: &'a Statement) -> Self {
        Self { file, tokens: &stmt.tokens, pos: 0 }
    }

    pub fn file(&self) -> &'a str {
        self.file
    }

    pub fn location_of(&self, token: &Token) -> SourceLocation {
        locate(self.file, token)
    }

    pub fn error_at(&self, token: &Token, message: impl Into<String>) -> ParseDiagnostic {
        ParseDiagnostic::error(self.location_of(token), message)
    }

    /// Location of the statement's first token.
    pub fn start(&self) -> SourceLocation {
        self.location_of(&self.tokens[0])
    }

    fn last(&self) -> &'a Token {
        &self.tokens[self.tokens.len() - 1]
    }

    pub fn next(&mut self, what: &str) -> Step<&'a Token> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => Err(self.error_at(self.last(), format!("statement ends early, expected {what}"))),
        }
    }

    pub fn word(&mut self, what: &str) -> Step<(&'a str, &'a Token)> {
        let token = self.next(what)?;
        match &token.kind {
            TokenKind::Word(w) => Ok((w.as_str(), token)),
            _ => Err(self.error_at(token, format!("expected {what}, found {}", token.describe()))),
        }
    }

    pub fn keyword(&mut self, keyword: &str) -> Step<&'a Token> {
        let (w, token) = self.word(&format!("`{keyword}`"))?;
        if w == keyword {
            Ok(token)
        } else {
            Err(self.error_at(token, format!("expected `{keyword}`, found `{w}`")))
        }
    }

    pub fn string(&mut self, what: &str) -> Step<String> {
        let token = self.next(what)?;
        match &token.kind {
            TokenKind::Str(s) => Ok(s.clone()),
            _ => Err(self.error_at(token, format!("expected {what} (a quoted string), found {}", token.describe()))),
        }
    }

    /// Parses a word with `FromStr`, reporting failures at the word.
    pub fn parsed<T>(&mut self, what: &str) -> Step<(T, &'a Token)>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let (w, token) = self.word(what)?;
        w.parse::<T>().map(|v| (v, token)).map_err(|e| self.error_at(token, format!("invalid {what}: {e}")))
    }

    pub fn peek_word(&self) -> Option<&'a str> {
        match self.tokens.get(self.pos).map(|t| &t.kind) {
            Some(TokenKind::Word(w)) => Some(w.as_str()),
            _ => None,
        }
    }

    pub fn eat(&mut self, keyword: &str) -> bool {
        if self.peek_word() == Some(keyword) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// `[a, b, c]`, possibly empty.
    pub fn list<T>(&mut self, what: &str) -> Step<Vec<(T, &'a Token)>>
    where
        T: std::str::FromStr,
        T::Err: std::fmt::Display,
    {
        let open = self.next("`[`")?;
        if open.kind != TokenKind::LBracket {
            return Err(self.error_at(open, format!("expected `[`, found {}", open.describe())));
        }
        let mut items = Vec::new();
        if self.tokens.get(self.pos).map(|t| &t.kind) == Some(&TokenKind::RBracket) {
            self.pos += 1;
            return Ok(items);
        }
        loop {
            items.push(self.parsed::<T>(what)?);
            let sep = self.next("`,` or `]`")?;
            match sep.kind {
                TokenKind::Comma => continue,
                TokenKind::RBracket => return Ok(items),
                _ => return Err(self.error_at(sep, format!("expected `,` or `]`, found {}", sep.describe()))),
            }
        }
    }

    pub fn finish(&self) -> Step<()> {
        match self.tokens.get(self.pos) {
            None => Ok(()),
            Some(t) => Err(self.error_at(t, format!("unexpected {}", t.describe()))),
        }
    }
}
