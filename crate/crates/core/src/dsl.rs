//! Line-oriented text format for operator catalogs (`.gomsops`) and mode
//! definitions (`.gomsmodel`).
//!
//! ```text
//! # catalog
//! operator S "Scanning" category=perceptual duration=13ms source="Potter et al. 2014"
//! operator A "Adjusting the Accuracy" category=motor duration=param source="n/a"
//!
//! # modes
//! mode "Eye-gaze & Pinch": S + 2*M + Pr + 2*P_e + G_H + R_H
//! ```
//!
//! Blank lines and `#` comments are ignored; tokens may be separated by any
//! amount of whitespace. Each line is parsed independently, so one bad line
//! does not hide errors on later lines: every problem in the file is
//! reported, each with a 1-based line and column.

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::catalog::{Catalog, Duration, Ident, OperatorCategory, OperatorDef};
use crate::model::{Mode, ModelSet, OperatorTerm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParseErrorKind {
    Syntax,
    DuplicateSymbol,
    NegativeDuration,
    UnknownOperator,
    DuplicateMode,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
    /// The source text the error points at; always a substring of the line.
    pub offending_text: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

/// All errors found in one source file, in source order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseErrors(pub Vec<ParseError>);

impl ParseErrors {
    pub fn iter(&self) -> impl Iterator<Item = &ParseError> {
        self.0.iter()
    }

    pub fn first(&self) -> &ParseError {
        &self.0[0]
    }

    /// One `path:line:column: message` line per error.
    pub fn render(&self, path: &str) -> String {
        let mut out = String::new();
        for e in &self.0 {
            let _ = writeln!(out, "{path}:{e}");
        }
        out
    }
}

impl fmt::Display for ParseErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseErrors {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Str(String),
    UInt(u64),
    Eq,
    Colon,
    Plus,
    Star,
    Minus,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Str(_) => "string".to_string(),
            Tok::UInt(n) => format!("number `{n}`"),
            Tok::Eq => "`=`".to_string(),
            Tok::Colon => "`:`".to_string(),
            Tok::Plus => "`+`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Minus => "`-`".to_string(),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
    text: String,
}

/// One significant (non-blank, non-comment) line.
struct SourceLine {
    number: usize,
    tokens: Vec<Token>,
}

fn error(kind: ParseErrorKind, line: usize, column: usize, message: String, offending: &str) -> ParseError {
    ParseError {
        kind,
        line,
        column,
        message,
        offending_text: offending.to_string(),
    }
}

fn lex_line(number: usize, text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let slice = |a: usize, b: usize| chars[a..b].iter().collect::<String>();
    let syntax = |col: usize, msg: String, off: String| error(ParseErrorKind::Syntax, number, col + 1, msg, &off);
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        let tok = match c {
            '#' => break,
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '=' | ':' | '+' | '*' | '-' => {
                i += 1;
                match c {
                    '=' => Tok::Eq,
                    ':' => Tok::Colon,
                    '+' => Tok::Plus,
                    '*' => Tok::Star,
                    _ => Tok::Minus,
                }
            }
            '"' => {
                i += 1;
                let mut value = String::new();
                loop {
                    match chars.get(i) {
                        None => {
                            return Err(syntax(start, "unterminated string".into(), slice(start, chars.len())));
                        }
                        Some('"') => {
                            i += 1;
                            break;
                        }
                        Some('\\') => match chars.get(i + 1) {
                            Some(&e @ ('"' | '\\')) => {
                                value.push(e);
                                i += 2;
                            }
                            _ => {
                                let end = (i + 2).min(chars.len());
                                return Err(syntax(
                                    i,
                                    "invalid escape in string (only \\\" and \\\\ are allowed)".into(),
                                    slice(i, end),
                                ));
                            }
                        },
                        Some(&ch) => {
                            value.push(ch);
                            i += 1;
                        }
                    }
                }
                Tok::Str(value)
            }
            c if c.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let digits = slice(start, i);
                match digits.parse::<u64>() {
                    Ok(n) => Tok::UInt(n),
                    Err(_) => return Err(syntax(start, format!("number `{digits}` is too large"), digits)),
                }
            }
            c if c.is_ascii_alphabetic() => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                Tok::Ident(slice(start, i))
            }
            other => {
                return Err(syntax(start, format!("unexpected character `{other}`"), other.to_string()));
            }
        };
        tokens.push(Token {
            tok,
            column: start + 1,
            text: slice(start, i),
        });
    }
    Ok(tokens)
}

/// Splits source into significant lines, lexing each. Lex errors are pushed
/// to `errors` and the line is skipped.
fn lines(source: &str, errors: &mut Vec<ParseError>) -> Vec<SourceLine> {
    let mut out = Vec::new();
    for (idx, raw) in source.split('\n').enumerate() {
        let text = raw.strip_suffix('\r').unwrap_or(raw);
        match lex_line(idx + 1, text) {
            Ok(tokens) if tokens.is_empty() => {}
            Ok(tokens) => out.push(SourceLine {
                number: idx + 1,
                tokens,
            }),
            Err(e) => errors.push(e),
        }
    }
    out
}

struct Cursor<'l> {
    line: usize,
    tokens: &'l [Token],
    pos: usize,
}

impl<'l> Cursor<'l> {
    fn new(line: &'l SourceLine) -> Self {
        Cursor {
            line: line.number,
            tokens: &line.tokens,
            pos: 0,
        }
    }

    fn peek(&self) -> Option<&'l Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'l Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    /// Error anchored at the next token, or at the last token when the line
    /// ended early.
    fn err_here(&self, kind: ParseErrorKind, expected: &str) -> ParseError {
        match self.peek() {
            Some(t) => error(
                kind,
                self.line,
                t.column,
                format!("expected {expected}, found {}", t.tok.describe()),
                &t.text,
            ),
            None => {
                let last = self.tokens.last().expect("significant lines have tokens");
                error(
                    kind,
                    self.line,
                    last.column,
                    format!("expected {expected} after `{}`, found end of line", last.text),
                    &last.text,
                )
            }
        }
    }

    fn err_at(&self, t: &Token, kind: ParseErrorKind, message: String) -> ParseError {
        error(kind, self.line, t.column, message, &t.text)
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<&'l Token, ParseError> {
        match self.peek() {
            Some(t) if t.tok == want => Ok(self.next().unwrap()),
            _ => Err(self.err_here(ParseErrorKind::Syntax, expected)),
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(&'l Token, &'l str), ParseError> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(s), .. }) => {
                self.pos += 1;
                Ok((t, s.as_str()))
            }
            _ => Err(self.err_here(ParseErrorKind::Syntax, expected)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<&'l Token, ParseError> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Ident(s), .. }) if s == kw => {
                self.pos += 1;
                Ok(t)
            }
            _ => Err(self.err_here(ParseErrorKind::Syntax, &format!("`{kw}`"))),
        }
    }

    fn string(&mut self, expected: &str) -> Result<(&'l Token, &'l str), ParseError> {
        match self.peek() {
            Some(t @ Token { tok: Tok::Str(s), .. }) => {
                self.pos += 1;
                Ok((t, s.as_str()))
            }
            _ => Err(self.err_here(ParseErrorKind::Syntax, expected)),
        }
    }

    fn attribute(&mut self, key: &str) -> Result<(), ParseError> {
        self.keyword(key)?;
        self.expect(Tok::Eq, &format!("`=` after `{key}`"))?;
        Ok(())
    }

    fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err_at(
                t,
                ParseErrorKind::Syntax,
                format!("unexpected {} at end of declaration", t.tok.describe()),
            )),
        }
    }
}

fn parse_operator_line(cur: &mut Cursor<'_>) -> Result<(OperatorDef, usize, String), ParseError> {
    cur.keyword("operator")?;
    let (sym_tok, symbol) = cur.ident("operator symbol")?;
    let (_, display_name) = cur.string("quoted display name")?;

    cur.attribute("category")?;
    let (cat_tok, cat) = cur.ident("category (perceptual, cognitive, motor or general)")?;
    let category = OperatorCategory::from_keyword(cat).ok_or_else(|| {
        cur.err_at(
            cat_tok,
            ParseErrorKind::Syntax,
            format!("unknown category `{cat}` (expected perceptual, cognitive, motor or general)"),
        )
    })?;

    cur.attribute("duration")?;
    let duration = match cur.peek().map(|t| &t.tok) {
        Some(Tok::UInt(ms)) => {
            let ms = *ms;
            cur.next();
            cur.keyword("ms")?;
            Duration::Fixed(ms)
        }
        Some(Tok::Minus) => {
            let minus = cur.next().unwrap();
            return Err(cur.err_at(
                minus,
                ParseErrorKind::NegativeDuration,
                format!("negative duration for operator `{symbol}`"),
            ));
        }
        Some(Tok::Ident(s)) if s == "param" => {
            cur.next();
            if cur.peek().map(|t| &t.tok) == Some(&Tok::Colon) {
                cur.next();
                let (_, name) = cur.ident("parameter name after `param:`")?;
                Duration::Parameter(Ident::new(name).expect("lexer only yields identifiers"))
            } else {
                Duration::Parameter(Ident::new(symbol).expect("lexer only yields identifiers"))
            }
        }
        _ => return Err(cur.err_here(ParseErrorKind::Syntax, "duration (`<N>ms` or `param`)")),
    };

    cur.attribute("source")?;
    let (_, source) = cur.string("quoted source citation")?;
    cur.end()?;

    let def = OperatorDef {
        symbol: Ident::new(symbol).expect("lexer only yields identifiers"),
        display_name: display_name.to_string(),
        category,
        duration,
        source: source.to_string(),
    };
    Ok((def, sym_tok.column, sym_tok.text.clone()))
}

/// Parses a `.gomsops` catalog file.
pub fn parse_catalog(source: &str) -> Result<Catalog, ParseErrors> {
    let mut errors = Vec::new();
    let mut catalog = Catalog::new();
    for line in lines(source, &mut errors) {
        let mut cur = Cursor::new(&line);
        match parse_operator_line(&mut cur) {
            Ok((def, column, text)) => {
                if catalog.contains(def.symbol.as_str()) {
                    errors.push(error(
                        ParseErrorKind::DuplicateSymbol,
                        line.number,
                        column,
                        format!("duplicate operator symbol `{}`", def.symbol),
                        &text,
                    ));
                } else {
                    catalog.insert(def).expect("checked for duplicates");
                }
            }
            Err(e) => errors.push(e),
        }
    }
    finish(catalog, errors)
}

fn parse_mode_line(cur: &mut Cursor<'_>, catalog: &Catalog) -> Result<Mode, ParseError> {
    cur.keyword("mode")?;
    let (name_tok, name) = cur.string("quoted mode name")?;
    if name.is_empty() {
        return Err(cur.err_at(name_tok, ParseErrorKind::Syntax, "mode name must not be empty".into()));
    }
    cur.expect(Tok::Colon, "`:` after mode name")?;
    let mut terms = Vec::new();
    loop {
        let count = match cur.peek().map(|t| &t.tok) {
            Some(Tok::UInt(n)) => {
                let tok = cur.next().unwrap();
                let n = *n;
                if cur.peek().map(|t| &t.tok) != Some(&Tok::Star) {
                    return Err(cur.err_here(
                        ParseErrorKind::Syntax,
                        &format!("`*` after count `{n}` (write `{n}*X`, not `{n}X`)"),
                    ));
                }
                cur.next();
                if n == 0 {
                    return Err(cur.err_at(tok, ParseErrorKind::Syntax, "operator count must be at least 1".into()));
                }
                u32::try_from(n).map_err(|_| {
                    cur.err_at(tok, ParseErrorKind::Syntax, format!("operator count `{n}` is too large"))
                })?
            }
            _ => 1,
        };
        let (sym_tok, symbol) = cur.ident("operator symbol")?;
        if !catalog.contains(symbol) {
            return Err(cur.err_at(
                sym_tok,
                ParseErrorKind::UnknownOperator,
                format!("unknown operator `{symbol}`"),
            ));
        }
        terms.push(OperatorTerm {
            count,
            symbol: Ident::new(symbol).expect("lexer only yields identifiers"),
        });
        match cur.peek() {
            None => break,
            Some(Token { tok: Tok::Plus, .. }) => {
                cur.next();
            }
            Some(_) => return Err(cur.err_here(ParseErrorKind::Syntax, "`+` or end of line")),
        }
    }
    Ok(Mode::new(name, terms).expect("validated while parsing"))
}

/// Parses a `.gomsmodel` file, resolving every operator reference against
/// `catalog`.
pub fn parse_modes(source: &str, catalog: &Catalog) -> Result<ModelSet, ParseErrors> {
    let mut errors = Vec::new();
    let mut modes: Vec<Mode> = Vec::new();
    let mut names = HashSet::new();
    for line in lines(source, &mut errors) {
        let mut cur = Cursor::new(&line);
        match parse_mode_line(&mut cur, catalog) {
            Ok(mode) => {
                if names.insert(mode.name().to_string()) {
                    modes.push(mode);
                } else {
                    let t = &line.tokens[1];
                    errors.push(error(
                        ParseErrorKind::DuplicateMode,
                        line.number,
                        t.column,
                        format!("duplicate mode name \"{}\"", mode.name()),
                        &t.text,
                    ));
                }
            }
            Err(e) => errors.push(e),
        }
    }
    finish(modes, errors).map(|modes| ModelSet::new(modes).expect("names checked while parsing"))
}

fn finish<T>(value: T, mut errors: Vec<ParseError>) -> Result<T, ParseErrors> {
    if errors.is_empty() {
        Ok(value)
    } else {
        errors.sort_by_key(|e| (e.line, e.column));
        Err(ParseErrors(errors))
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

/// One `operator` line per definition, in catalog order. Strings must not
/// contain line breaks.
pub fn serialize_catalog(catalog: &Catalog) -> String {
    let mut out = String::new();
    for op in catalog {
        let duration = match &op.duration {
            Duration::Fixed(ms) => format!("{ms}ms"),
            Duration::Parameter(p) if p == &op.symbol => "param".to_string(),
            Duration::Parameter(p) => format!("param:{p}"),
        };
        let _ = writeln!(
            out,
            "operator {} {} category={} duration={} source={}",
            op.symbol,
            quote(&op.display_name),
            op.category.keyword(),
            duration,
            quote(&op.source),
        );
    }
    out
}

/// Formats terms as `S + 2*M + ...`, omitting a count of 1.
pub fn format_terms(terms: &[OperatorTerm]) -> String {
    terms
        .iter()
        .map(|t| {
            if t.count == 1 {
                t.symbol.to_string()
            } else {
                format!("{}*{}", t.count, t.symbol)
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn serialize_modes(models: &ModelSet) -> String {
    let mut out = String::new();
    for mode in models.modes() {
        let _ = writeln!(out, "mode {}: {}", quote(mode.name()), format_terms(mode.terms()));
    }
    out
}
