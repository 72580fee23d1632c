//! Structure-file lexer and parser.
//!
//! A file is a sequence of line-oriented declarations:
//!
//! ```text
//! chart M dim 3 coords x y z
//! point origin on M: x = 0, y = 0, z = 0
//! gac darboux on M from contact {
//!     xi = dz - y*dx
//!     sample = origin
//! }
//! check gac-normality darboux direct
//! ```
//!
//! Expressions are typed while parsing. `*` scales by scalars and is the
//! tensor product between a vector and a form (an endomorphism) or two
//! 1-forms (a covariant 2-tensor); `^^` is the wedge and binds tighter than
//! `*`. There is no implicit multiplication.

use std::collections::BTreeMap;
use std::fmt;

use gcverify_core::calculus::{Chart, Endomorphism, KForm, Multivector, SymmetricTensor};
use gcverify_core::scalar::{GaussianRational, Matrix, ScalarField, EXP_NAME};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    Lexical,
    Syntax,
    Binding,
    Arity,
    Domain,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lexical => "lexical",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Binding => "binding",
            ErrorKind::Arity => "arity",
            ErrorKind::Domain => "domain",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ErrorKind,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}: {} error: {}",
            self.line, self.col, self.kind, self.message
        )?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of: {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Source position. Positions never take part in structural equality.
#[derive(Clone, Copy, Debug, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Pos) -> bool {
        true
    }
}

impl Eq for Pos {}

// ---- values ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Scalar(ScalarField),
    Form(KForm),
    Multi(Multivector),
    Endo(Endomorphism),
    /// General covariant 2-tensor, `m[i][j] = T(d_i, d_j)`.
    Tensor2(Matrix),
}

impl Value {
    fn describe(&self) -> String {
        match self {
            Value::Scalar(_) => "scalar".into(),
            Value::Form(f) => format!("{}-form", f.degree()),
            Value::Multi(p) if p.degree() == 1 => "vector field".into(),
            Value::Multi(p) => format!("{}-vector", p.degree()),
            Value::Endo(_) => "endomorphism".into(),
            Value::Tensor2(_) => "covariant 2-tensor".into(),
        }
    }
}

/// What a structure field must hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldType {
    Form(usize),
    Vector,
    Bivector,
    Endo,
    Metric,
    /// Name of an earlier structure of one of these kinds.
    Ref(&'static [&'static str]),
    Point,
}

impl FieldType {
    fn describe(self) -> String {
        match self {
            FieldType::Form(k) => format!("{k}-form"),
            FieldType::Vector => "vector field".into(),
            FieldType::Bivector => "bivector".into(),
            FieldType::Endo => "endomorphism".into(),
            FieldType::Metric => "symmetric 2-tensor".into(),
            FieldType::Ref(kinds) => format!("name of a {} structure", kinds.join(" or ")),
            FieldType::Point => "sample point name".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldValue {
    Form(KForm),
    Multi(Multivector),
    Endo(Endomorphism),
    Metric(SymmetricTensor),
    Ref(String),
    Point(String),
}

pub struct Schema {
    pub kind: &'static str,
    pub source: Option<&'static str>,
    /// `(name, type, required)`.
    pub fields: &'static [(&'static str, FieldType, bool)],
}

use FieldType as T;

const CAC_KINDS: &[&str] = &["cac", "cacm"];

pub const SCHEMAS: &[Schema] = &[
    Schema {
        kind: "gcx",
        source: None,
        fields: &[
            ("A", T::Endo, true),
            ("pi", T::Bivector, true),
            ("sigma", T::Form(2), true),
            ("B", T::Form(2), false),
        ],
    },
    Schema {
        kind: "gcx",
        source: Some("complex"),
        fields: &[("J", T::Endo, true), ("B", T::Form(2), false)],
    },
    Schema {
        kind: "gcx",
        source: Some("symplectic"),
        fields: &[("omega", T::Form(2), true), ("B", T::Form(2), false)],
    },
    Schema {
        kind: "gcx",
        source: Some("hitchin"),
        fields: &[
            ("varpi", T::Form(2), true),
            ("A", T::Endo, true),
            ("B", T::Form(2), false),
        ],
    },
    Schema {
        kind: "grm",
        source: None,
        fields: &[("gamma", T::Metric, true), ("psi", T::Form(2), false)],
    },
    Schema {
        kind: "gah",
        source: None,
        fields: &[
            ("gamma", T::Metric, true),
            ("psi", T::Form(2), false),
            ("A", T::Endo, true),
            ("pi", T::Bivector, true),
            ("sigma", T::Form(2), true),
        ],
    },
    Schema {
        kind: "gah",
        source: Some("bihermitian"),
        fields: &[
            ("gamma", T::Metric, true),
            ("psi", T::Form(2), false),
            ("jplus", T::Endo, true),
            ("jminus", T::Endo, true),
        ],
    },
    Schema {
        kind: "gah",
        source: Some("parts"),
        fields: &[
            ("metric", T::Ref(&["grm"]), true),
            ("structure", T::Ref(&["gcx"]), true),
        ],
    },
    Schema {
        kind: "cac",
        source: None,
        fields: &[
            ("F", T::Endo, true),
            ("Z", T::Vector, true),
            ("xi", T::Form(1), true),
        ],
    },
    Schema {
        kind: "cacm",
        source: None,
        fields: &[
            ("F", T::Endo, true),
            ("Z", T::Vector, true),
            ("xi", T::Form(1), true),
            ("gamma", T::Metric, true),
        ],
    },
    Schema {
        kind: "cacm",
        source: Some("conjugate"),
        fields: &[("base", T::Ref(&["cacm"]), true)],
    },
    Schema {
        kind: "gac",
        source: None,
        fields: &[
            ("F", T::Endo, true),
            ("P", T::Bivector, true),
            ("theta", T::Form(2), true),
            ("Z", T::Vector, true),
            ("xi", T::Form(1), true),
        ],
    },
    Schema {
        kind: "gac",
        source: Some("cac"),
        fields: &[("base", T::Ref(CAC_KINDS), true)],
    },
    Schema {
        kind: "gac",
        source: Some("contact"),
        fields: &[("xi", T::Form(1), true), ("sample", T::Point, true)],
    },
    Schema {
        kind: "gac",
        source: Some("cosymplectic"),
        fields: &[
            ("xi", T::Form(1), true),
            ("theta", T::Form(2), true),
            ("sample", T::Point, true),
        ],
    },
    Schema {
        kind: "sasakian-pair",
        source: None,
        fields: &[
            ("plus", T::Ref(&["cacm"]), true),
            ("minus", T::Ref(&["cacm"]), true),
            ("kappa", T::Form(1), false),
        ],
    },
];

pub fn schema(kind: &str, source: Option<&str>) -> Option<&'static Schema> {
    SCHEMAS
        .iter()
        .find(|s| s.kind == kind && s.source == source)
}

pub const KINDS: &[&str] = &["gcx", "grm", "gah", "cac", "cacm", "gac", "sasakian-pair"];

// ---- file ----

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartDecl {
    pub chart: Chart,
    /// Coordinates as listed; cylinders add `t` themselves.
    pub base: Vec<String>,
    pub cylinder: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDecl {
    pub name: String,
    pub chart: String,
    pub values: BTreeMap<String, GaussianRational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureDecl {
    pub name: String,
    pub kind: String,
    pub chart: String,
    pub source: Option<String>,
    pub fields: Vec<(String, FieldValue)>,
    pub at: Pos,
}

impl StructureDecl {
    pub fn field(&self, name: &str) -> Option<&FieldValue> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckDecl {
    pub structure: String,
    pub check: String,
    pub method: Option<String>,
    pub at: Pos,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureFile {
    pub charts: Vec<ChartDecl>,
    pub points: Vec<PointDecl>,
    pub structures: Vec<StructureDecl>,
    pub checks: Vec<CheckDecl>,
}

impl StructureFile {
    pub fn chart(&self, name: &str) -> Option<&ChartDecl> {
        self.charts.iter().find(|c| c.chart.name() == name)
    }

    pub fn point(&self, name: &str) -> Option<&PointDecl> {
        self.points.iter().find(|p| p.name == name)
    }

    pub fn structure(&self, name: &str) -> Option<&StructureDecl> {
        self.structures.iter().find(|s| s.name == name)
    }
}

// ---- lexer ----

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Frame(String),
    Int(i64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Wedge,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Eq,
    Newline,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Frame(s) => format!("`@{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Newline => "end of line".into(),
            Tok::Eof => "end of file".into(),
            other => format!("`{}`", other.symbol()),
        }
    }

    fn symbol(&self) -> &'static str {
        match self {
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            Tok::Wedge => "^^",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Comma => ",",
            Tok::Colon => ":",
            Tok::Eq => "=",
            _ => "",
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
    start: usize,
    end: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut line_start) = (1usize, 0usize);
    let mut depth = 0usize;
    let mut k = 0;
    let err = |line: usize, col: usize, msg: String| ParseError {
        line,
        col,
        kind: ErrorKind::Lexical,
        message: msg,
        expected: vec![],
    };
    while k < chars.len() {
        let (start, c) = chars[k];
        let col = text[line_start..start].chars().count() + 1;
        let push = |out: &mut Vec<Token>, tok: Tok, end: usize| {
            out.push(Token {
                tok,
                line,
                col,
                start,
                end,
            })
        };
        match c {
            '\n' | ';' => {
                if depth == 0 {
                    push(&mut out, Tok::Newline, start + 1);
                }
                k += 1;
                if c == '\n' {
                    line += 1;
                    line_start = start + 1;
                }
            }
            '#' => {
                while k < chars.len() && chars[k].1 != '\n' {
                    k += 1;
                }
            }
            c if c.is_whitespace() => k += 1,
            c if is_ident_start(c) => {
                let mut j = k;
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |x| x.0);
                push(&mut out, Tok::Ident(text[start..end].to_string()), end);
                k = j;
            }
            '@' => {
                let mut j = k + 1;
                if j >= chars.len() || !is_ident_start(chars[j].1) {
                    return Err(err(
                        line,
                        col,
                        "`@` must be followed by a coordinate name".into(),
                    ));
                }
                while j < chars.len() && is_ident_char(chars[j].1) {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |x| x.0);
                push(&mut out, Tok::Frame(text[start + 1..end].to_string()), end);
                k = j;
            }
            c if c.is_ascii_digit() => {
                let mut j = k;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                let end = chars.get(j).map_or(text.len(), |x| x.0);
                if j < chars.len() && (chars[j].1 == '.' || is_ident_start(chars[j].1)) {
                    return Err(err(
                        line,
                        col,
                        "malformed number; write rationals as `p/q` and products with `*`".into(),
                    ));
                }
                let n: i64 = text[start..end]
                    .parse()
                    .map_err(|_| err(line, col, "integer literal out of range".into()))?;
                push(&mut out, Tok::Int(n), end);
                k = j;
            }
            _ => {
                let (tok, len) = match c {
                    '+' => (Tok::Plus, 1),
                    '-' => (Tok::Minus, 1),
                    '*' => (Tok::Star, 1),
                    '/' => (Tok::Slash, 1),
                    '^' if chars.get(k + 1).map(|x| x.1) == Some('^') => (Tok::Wedge, 2),
                    '^' => (Tok::Caret, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    ',' => (Tok::Comma, 1),
                    ':' => (Tok::Colon, 1),
                    '=' => (Tok::Eq, 1),
                    other => return Err(err(line, col, format!("unexpected character `{other}`"))),
                };
                match tok {
                    Tok::LParen => depth += 1,
                    Tok::RParen => depth = depth.saturating_sub(1),
                    _ => {}
                }
                push(&mut out, tok, start + len);
                k += len;
            }
        }
    }
    let col = text[line_start..].chars().count() + 1;
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
        start: text.len(),
        end: text.len(),
    });
    Ok(out)
}

// ---- parser ----

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    file: StructureFile,
}

type PResult<T> = Result<T, ParseError>;

fn expected(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Parses and binds a structure file.
pub fn parse(text: &str) -> PResult<StructureFile> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        file: StructureFile::default(),
    };
    p.file_body()?;
    Ok(p.file)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at(&self, tok: &Tok) -> bool {
        &self.peek().tok == tok
    }

    fn error_at(&self, t: &Token, kind: ErrorKind, message: impl Into<String>) -> ParseError {
        ParseError {
            line: t.line,
            col: t.col,
            kind,
            message: message.into(),
            expected: vec![],
        }
    }

    fn unexpected(&self, exp: Vec<String>) -> ParseError {
        let t = self.peek();
        ParseError {
            line: t.line,
            col: t.col,
            kind: ErrorKind::Syntax,
            message: format!("unexpected {}", t.tok.describe()),
            expected: exp,
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<Token> {
        if self.at(&tok) {
            Ok(self.bump())
        } else {
            Err(self.unexpected(vec![tok.describe()]))
        }
    }

    fn skip_newlines(&mut self) {
        while self.at(&Tok::Newline) {
            self.bump();
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        match self.peek().tok {
            Tok::Newline => {
                self.bump();
                Ok(())
            }
            Tok::Eof | Tok::RBrace => Ok(()),
            _ => Err(self.unexpected(expected(&["end of line"]))),
        }
    }

    fn keyword(&mut self, word: &str) -> PResult<Token> {
        match &self.peek().tok {
            Tok::Ident(s) if s == word => Ok(self.bump()),
            _ => Err(self.unexpected(vec![format!("`{word}`")])),
        }
    }

    fn ident(&mut self, what: &str) -> PResult<(String, Token)> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let s = s.clone();
                Ok((s, self.bump()))
            }
            _ => Err(self.unexpected(vec![what.to_string()])),
        }
    }

    /// A name such as `flat-kahler-R4`: identifier and number pieces joined
    /// by `-` with no whitespace.
    fn name(&mut self, what: &str) -> PResult<(String, Token)> {
        let (mut s, first) = self.ident(what)?;
        let mut end = first.end;
        loop {
            let (t0, t1) = (&self.toks[self.pos], self.toks.get(self.pos + 1));
            let Some(t1) = t1 else { break };
            if t0.tok != Tok::Minus || t0.start != end || t1.start != t0.end {
                break;
            }
            let piece = match &t1.tok {
                Tok::Ident(x) => x.clone(),
                Tok::Int(n) => n.to_string(),
                _ => break,
            };
            s.push('-');
            s.push_str(&piece);
            end = t1.end;
            self.bump();
            self.bump();
        }
        Ok((s, first))
    }

    fn file_body(&mut self) -> PResult<()> {
        loop {
            self.skip_newlines();
            let t = self.peek().clone();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(w) if w == "chart" => self.chart_decl()?,
                Tok::Ident(w) if w == "point" => self.point_decl()?,
                Tok::Ident(w) if w == "check" => self.check_decl()?,
                Tok::Ident(w) if KINDS.contains(&w.as_str()) || w == "sasakian" => {
                    self.structure_decl()?
                }
                _ => {
                    let mut exp = expected(&["`chart`", "`point`", "`check`"]);
                    exp.extend(KINDS.iter().map(|k| format!("`{k}`")));
                    return Err(self.unexpected(exp));
                }
            }
        }
    }

    fn chart_decl(&mut self) -> PResult<()> {
        self.keyword("chart")?;
        let (name, nt) = self.ident("chart name")?;
        if self.file.chart(&name).is_some() {
            return Err(self.error_at(
                &nt,
                ErrorKind::Binding,
                format!("chart `{name}` declared twice"),
            ));
        }
        self.keyword("dim")?;
        let dt = self.peek().clone();
        let dim = match dt.tok {
            Tok::Int(n) if n > 0 => {
                self.bump();
                n as usize
            }
            _ => return Err(self.unexpected(expected(&["positive integer"]))),
        };
        self.keyword("coords")?;
        let mut coords: Vec<(String, Token)> = Vec::new();
        let mut cylinder = false;
        loop {
            match &self.peek().tok {
                Tok::Ident(w) if w == "cylinder" => {
                    self.bump();
                    cylinder = true;
                    break;
                }
                Tok::Ident(_) => coords.push(self.ident("coordinate")?),
                _ => break,
            }
        }
        if coords.is_empty() {
            return Err(self.unexpected(expected(&["coordinate name"])));
        }
        for (k, (c, ct)) in coords.iter().enumerate() {
            let reserved = c == "i" || c == "exp" || (cylinder && c == "t");
            if reserved {
                return Err(self.error_at(
                    ct,
                    ErrorKind::Binding,
                    format!("`{c}` is reserved and cannot name a coordinate"),
                ));
            }
            if coords[..k].iter().any(|(o, _)| o == c) {
                return Err(self.error_at(
                    ct,
                    ErrorKind::Binding,
                    format!("coordinate `{c}` listed twice"),
                ));
            }
            if coords
                .iter()
                .any(|(o, _)| c.strip_prefix('d') == Some(o.as_str()))
            {
                return Err(self.error_at(
                    ct,
                    ErrorKind::Binding,
                    format!("coordinate `{c}` clashes with a coframe symbol"),
                ));
            }
        }
        let total = coords.len() + usize::from(cylinder);
        if total != dim {
            return Err(self.error_at(
                &dt,
                ErrorKind::Arity,
                format!(
                    "dim {dim} does not match {total} coordinates{}",
                    if cylinder { " (including t)" } else { "" }
                ),
            ));
        }
        let base: Vec<String> = coords.into_iter().map(|(c, _)| c).collect();
        let refs: Vec<&str> = base.iter().map(String::as_str).collect();
        let chart = if cylinder {
            Chart::cylinder(&name, &refs)
        } else {
            Chart::new(&name, &refs)
        }
        .map_err(|e| self.error_at(&nt, ErrorKind::Binding, e.to_string()))?;
        self.file.charts.push(ChartDecl {
            chart,
            base,
            cylinder,
        });
        self.end_of_statement()
    }

    fn chart_ref(&mut self) -> PResult<Chart> {
        self.keyword("on")?;
        let (name, t) = self.ident("chart name")?;
        match self.file.chart(&name) {
            Some(c) => Ok(c.chart.clone()),
            None => Err(ParseError {
                expected: self
                    .file
                    .charts
                    .iter()
                    .map(|c| c.chart.name().to_string())
                    .collect(),
                ..self.error_at(&t, ErrorKind::Binding, format!("undeclared chart `{name}`"))
            }),
        }
    }

    fn point_decl(&mut self) -> PResult<()> {
        self.keyword("point")?;
        let (name, nt) = self.name("point name")?;
        if self.file.point(&name).is_some() {
            return Err(self.error_at(
                &nt,
                ErrorKind::Binding,
                format!("point `{name}` declared twice"),
            ));
        }
        let chart = self.chart_ref()?;
        self.expect(Tok::Colon)?;
        let mut values = BTreeMap::new();
        loop {
            let kt = self.peek().clone();
            let key = self.point_key(&chart)?;
            self.expect(Tok::Eq)?;
            let vt = self.peek().clone();
            let v = match self.expr(&chart)? {
                Value::Scalar(f) if f.denominator().is_one() && f.numerator().is_constant() => {
                    f.numerator().constant_term()
                }
                other => {
                    return Err(self.error_at(
                        &vt,
                        ErrorKind::Arity,
                        format!(
                            "point value must be a constant, found a {}",
                            other.describe()
                        ),
                    ))
                }
            };
            if values.insert(key.clone(), v).is_some() {
                return Err(self.error_at(&kt, ErrorKind::Binding, format!("`{key}` given twice")));
            }
            if !self.at(&Tok::Comma) {
                break;
            }
            self.bump();
        }
        if chart.is_cylinder()
            && !values.contains_key(EXP_NAME)
            && values.get("t") == Some(&GaussianRational::from_int(0))
        {
            values.insert(EXP_NAME.to_string(), GaussianRational::from_int(1));
        }
        let mut missing: Vec<String> = chart
            .coords()
            .iter()
            .filter(|c| !values.contains_key(*c))
            .cloned()
            .collect();
        if chart.is_cylinder() && !values.contains_key(EXP_NAME) {
            missing.push(EXP_NAME.to_string());
        }
        if !missing.is_empty() {
            return Err(ParseError {
                expected: missing.clone(),
                ..self.error_at(
                    &nt,
                    ErrorKind::Binding,
                    format!("point `{name}` leaves {} unset", missing.join(", ")),
                )
            });
        }
        self.file.points.push(PointDecl {
            name,
            chart: chart.name().to_string(),
            values,
        });
        self.end_of_statement()
    }

    fn point_key(&mut self, chart: &Chart) -> PResult<String> {
        let t = self.peek().clone();
        let (key, _) = self.ident("coordinate")?;
        if key == "exp" && chart.is_cylinder() {
            self.expect(Tok::LParen)?;
            self.keyword("t")?;
            self.expect(Tok::RParen)?;
            return Ok(EXP_NAME.to_string());
        }
        if chart.coord_index(&key).is_none() {
            return Err(ParseError {
                expected: chart.coords().to_vec(),
                ..self.error_at(
                    &t,
                    ErrorKind::Binding,
                    format!("`{key}` is not a coordinate of `{}`", chart.name()),
                )
            });
        }
        Ok(key)
    }

    fn check_decl(&mut self) -> PResult<()> {
        let kw = self.keyword("check")?;
        let (check, _) = self.name("check id")?;
        let (structure, st) = self.name("structure name")?;
        if self.file.structure(&structure).is_none() {
            return Err(ParseError {
                expected: self
                    .file
                    .structures
                    .iter()
                    .map(|s| s.name.clone())
                    .collect(),
                ..self.error_at(
                    &st,
                    ErrorKind::Binding,
                    format!("undeclared structure `{structure}`"),
                )
            });
        }
        let method = match self.peek().tok {
            Tok::Ident(_) => Some(self.name("method")?.0),
            _ => None,
        };
        self.file.checks.push(CheckDecl {
            structure,
            check,
            method,
            at: Pos {
                line: kw.line,
                col: kw.col,
            },
        });
        self.end_of_statement()
    }

    fn structure_decl(&mut self) -> PResult<()> {
        let (kind, kt) = self.name("structure kind")?;
        if !KINDS.contains(&kind.as_str()) {
            return Err(ParseError {
                expected: expected(KINDS),
                ..self.error_at(
                    &kt,
                    ErrorKind::Syntax,
                    format!("unknown structure kind `{kind}`"),
                )
            });
        }
        let (name, nt) = self.name("structure name")?;
        if self.file.structure(&name).is_some() {
            return Err(self.error_at(
                &nt,
                ErrorKind::Binding,
                format!("structure `{name}` declared twice"),
            ));
        }
        let chart = self.chart_ref()?;
        let source = match &self.peek().tok {
            Tok::Ident(w) if w == "from" => {
                self.bump();
                let st = self.peek().clone();
                let (s, _) = self.ident("construction")?;
                if schema(&kind, Some(&s)).is_none() {
                    let options: Vec<String> = SCHEMAS
                        .iter()
                        .filter(|x| x.kind == kind)
                        .filter_map(|x| x.source.map(|s| format!("`{s}`")))
                        .collect();
                    return Err(ParseError {
                        expected: options,
                        ..self.error_at(
                            &st,
                            ErrorKind::Syntax,
                            format!("`{kind}` has no construction `{s}`"),
                        )
                    });
                }
                Some(s)
            }
            _ => None,
        };
        let sch = schema(&kind, source.as_deref())
            .ok_or_else(|| self.unexpected(expected(&["`from`"])))?;
        self.skip_newlines();
        self.expect(Tok::LBrace)?;
        let mut fields: Vec<(String, FieldValue)> = Vec::new();
        loop {
            self.skip_newlines();
            if self.at(&Tok::RBrace) {
                self.bump();
                break;
            }
            let ft = self.peek().clone();
            let (fname, _) = match self.ident("field name") {
                Ok(x) => x,
                Err(mut e) => {
                    e.expected = sch.fields.iter().map(|f| format!("`{}`", f.0)).collect();
                    e.expected.push("`}`".into());
                    return Err(e);
                }
            };
            let Some(&(_, ty, _)) = sch.fields.iter().find(|f| f.0 == fname) else {
                return Err(ParseError {
                    expected: sch.fields.iter().map(|f| format!("`{}`", f.0)).collect(),
                    ..self.error_at(
                        &ft,
                        ErrorKind::Binding,
                        format!("`{kind}` has no field `{fname}`"),
                    )
                });
            };
            if fields.iter().any(|(n, _)| *n == fname) {
                return Err(self.error_at(
                    &ft,
                    ErrorKind::Binding,
                    format!("field `{fname}` given twice"),
                ));
            }
            self.expect(Tok::Eq)?;
            let v = self.field_value(&chart, ty)?;
            fields.push((fname, v));
            self.end_of_statement()?;
        }
        for (fname, _, required) in sch.fields {
            if *required && !fields.iter().any(|(n, _)| n == fname) {
                return Err(ParseError {
                    expected: vec![format!("`{fname}`")],
                    ..self.error_at(
                        &nt,
                        ErrorKind::Binding,
                        format!("structure `{name}` is missing field `{fname}`"),
                    )
                });
            }
        }
        self.file.structures.push(StructureDecl {
            name,
            kind,
            chart: chart.name().to_string(),
            source,
            fields,
            at: Pos {
                line: kt.line,
                col: kt.col,
            },
        });
        self.end_of_statement()
    }

    fn field_value(&mut self, chart: &Chart, ty: FieldType) -> PResult<FieldValue> {
        let t = self.peek().clone();
        match ty {
            FieldType::Ref(kinds) => {
                let (name, nt) = self.name("structure name")?;
                let Some(s) = self.file.structure(&name) else {
                    return Err(self.error_at(
                        &nt,
                        ErrorKind::Binding,
                        format!("undeclared structure `{name}`"),
                    ));
                };
                if !kinds.contains(&s.kind.as_str()) {
                    return Err(self.error_at(
                        &nt,
                        ErrorKind::Arity,
                        format!("`{name}` is a {}, expected {}", s.kind, ty.describe()),
                    ));
                }
                if s.chart != chart.name() {
                    return Err(self.error_at(
                        &nt,
                        ErrorKind::Binding,
                        format!("`{name}` lives on chart `{}`", s.chart),
                    ));
                }
                return Ok(FieldValue::Ref(name));
            }
            FieldType::Point => {
                let (name, nt) = self.name("point name")?;
                let Some(p) = self.file.point(&name) else {
                    return Err(self.error_at(
                        &nt,
                        ErrorKind::Binding,
                        format!("undeclared point `{name}`"),
                    ));
                };
                if p.chart != chart.name() {
                    return Err(self.error_at(
                        &nt,
                        ErrorKind::Binding,
                        format!("point `{name}` lives on chart `{}`", p.chart),
                    ));
                }
                return Ok(FieldValue::Point(name));
            }
            _ => {}
        }
        let v = self.expr(chart)?;
        let mismatch = |v: &Value| {
            self.error_at(
                &t,
                ErrorKind::Arity,
                format!("expected a {}, found a {}", ty.describe(), v.describe()),
            )
        };
        let zero = |v: &Value| matches!(v, Value::Scalar(f) if f.is_zero());
        Ok(match (ty, v) {
            (FieldType::Form(k), Value::Form(f)) if f.degree() == k => FieldValue::Form(f),
            (FieldType::Form(k), v) if zero(&v) => FieldValue::Form(KForm::zero(chart, k)),
            (FieldType::Vector, Value::Multi(p)) if p.degree() == 1 => FieldValue::Multi(p),
            (FieldType::Vector, v) if zero(&v) => FieldValue::Multi(Multivector::zero(chart, 1)),
            (FieldType::Bivector, Value::Multi(p)) if p.degree() == 2 => FieldValue::Multi(p),
            (FieldType::Bivector, v) if zero(&v) => FieldValue::Multi(Multivector::zero(chart, 2)),
            (FieldType::Endo, Value::Endo(a)) => FieldValue::Endo(a),
            (FieldType::Endo, Value::Scalar(c)) => {
                FieldValue::Endo(Endomorphism::identity(chart).scale(&c))
            }
            (FieldType::Metric, Value::Tensor2(m)) => FieldValue::Metric(
                SymmetricTensor::new(chart, m)
                    .map_err(|e| self.error_at(&t, ErrorKind::Arity, format!("metric: {e}")))?,
            ),
            (FieldType::Metric, v) if zero(&v) => {
                FieldValue::Metric(SymmetricTensor::euclidean(chart).scale(&chart.zero()))
            }
            (_, v) => return Err(mismatch(&v)),
        })
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self, chart: &Chart) -> PResult<Value> {
        let mut acc = self.term(chart)?;
        loop {
            let op = self.peek().clone();
            let minus = match op.tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
            self.skip_newlines();
            let rhs = self.term(chart)?;
            acc = add(acc, rhs, minus).map_err(|m| self.error_at(&op, ErrorKind::Arity, m))?;
        }
    }

    // term := wedge (('*' | '/') wedge)*
    fn term(&mut self, chart: &Chart) -> PResult<Value> {
        let mut acc = self.wedge(chart)?;
        loop {
            let op = self.peek().clone();
            match op.tok {
                Tok::Star => {
                    self.bump();
                    self.skip_newlines();
                    let rhs = self.wedge(chart)?;
                    acc = mul(acc, rhs).map_err(|m| self.error_at(&op, ErrorKind::Arity, m))?;
                }
                Tok::Slash => {
                    self.bump();
                    self.skip_newlines();
                    let rhs = self.wedge(chart)?;
                    let Value::Scalar(d) = rhs else {
                        return Err(self.error_at(
                            &op,
                            ErrorKind::Arity,
                            format!("cannot divide by a {}", rhs.describe()),
                        ));
                    };
                    if d.is_zero() {
                        return Err(self.error_at(&op, ErrorKind::Domain, "division by zero"));
                    }
                    acc = scale(acc, &(&chart.one() / &d));
                }
                Tok::Ident(_) | Tok::Frame(_) | Tok::Int(_) | Tok::LParen => {
                    return Err(self.error_at(
                        &op,
                        ErrorKind::Syntax,
                        "implicit multiplication is not allowed; write `*`",
                    ));
                }
                _ => return Ok(acc),
            }
        }
    }

    // wedge := unary ('^^' unary)*
    fn wedge(&mut self, chart: &Chart) -> PResult<Value> {
        let mut acc = self.unary(chart)?;
        while self.at(&Tok::Wedge) {
            let op = self.bump();
            self.skip_newlines();
            let rhs = self.unary(chart)?;
            acc = wedge(acc, rhs).map_err(|m| self.error_at(&op, ErrorKind::Arity, m))?;
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self, chart: &Chart) -> PResult<Value> {
        if self.at(&Tok::Minus) {
            self.bump();
            let v = self.unary(chart)?;
            return Ok(scale(v, &chart.int(-1)));
        }
        self.power(chart)
    }

    // power := atom ('^' ['-'] int | '^' '(' ['-'] int ')')?
    fn power(&mut self, chart: &Chart) -> PResult<Value> {
        let base = self.atom(chart)?;
        if !self.at(&Tok::Caret) {
            return Ok(base);
        }
        let op = self.bump();
        let paren = self.at(&Tok::LParen);
        if paren {
            self.bump();
        }
        let neg = self.at(&Tok::Minus);
        if neg {
            self.bump();
        }
        let e = match self.peek().tok {
            Tok::Int(n) => {
                self.bump();
                n
            }
            _ => return Err(self.unexpected(expected(&["integer exponent"]))),
        };
        if paren {
            self.expect(Tok::RParen)?;
        }
        let Value::Scalar(b) = base else {
            return Err(self.error_at(
                &op,
                ErrorKind::Arity,
                format!("cannot raise a {} to a power", base.describe()),
            ));
        };
        let e = u32::try_from(e)
            .map_err(|_| self.error_at(&op, ErrorKind::Domain, "exponent out of range"))?;
        let mut acc = chart.one();
        for _ in 0..e {
            acc = &acc * &b;
        }
        if neg {
            if acc.is_zero() {
                return Err(self.error_at(&op, ErrorKind::Domain, "negative power of zero"));
            }
            acc = &chart.one() / &acc;
        }
        Ok(Value::Scalar(acc))
    }

    fn atom(&mut self, chart: &Chart) -> PResult<Value> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Value::Scalar(chart.int(*n)))
            }
            Tok::LParen => {
                self.bump();
                let v = self.expr(chart)?;
                self.expect(Tok::RParen)?;
                Ok(v)
            }
            Tok::Frame(c) => {
                self.bump();
                match chart.coord_index(c) {
                    Some(k) => Ok(Value::Multi(Multivector::basis(chart, &[k]))),
                    None => Err(self.undeclared(&t, &format!("@{c}"), chart)),
                }
            }
            Tok::Ident(s) => {
                self.bump();
                if s == "i" {
                    return Ok(Value::Scalar(chart.constant(GaussianRational::i())));
                }
                if s == "exp" && chart.is_cylinder() {
                    self.expect(Tok::LParen)?;
                    self.keyword("t")?;
                    self.expect(Tok::RParen)?;
                    return Ok(Value::Scalar(chart.exp_t(1).expect("cylinder chart")));
                }
                if let Some(k) = chart.coord_index(s) {
                    return Ok(Value::Scalar(chart.coord(k)));
                }
                if let Some(k) = s.strip_prefix('d').and_then(|c| chart.coord_index(c)) {
                    return Ok(Value::Form(KForm::basis(chart, &[k])));
                }
                Err(self.undeclared(&t, s, chart))
            }
            _ => Err(self.unexpected(expected(&[
                "number",
                "coordinate",
                "`d<coord>`",
                "`@<coord>`",
                "`i`",
                "`(`",
            ]))),
        }
    }

    fn undeclared(&self, t: &Token, sym: &str, chart: &Chart) -> ParseError {
        let mut exp: Vec<String> = chart.coords().to_vec();
        exp.extend(chart.coords().iter().map(|c| format!("d{c}")));
        exp.extend(chart.coords().iter().map(|c| format!("@{c}")));
        ParseError {
            expected: exp,
            ..self.error_at(
                t,
                ErrorKind::Binding,
                format!("undeclared symbol `{sym}` on chart `{}`", chart.name()),
            )
        }
    }
}

// ---- typed arithmetic ----

fn scale(v: Value, f: &ScalarField) -> Value {
    match v {
        Value::Scalar(s) => Value::Scalar(&s * f),
        Value::Form(a) => Value::Form(a.scale(f)),
        Value::Multi(p) => Value::Multi(p.scale(f)),
        Value::Endo(a) => Value::Endo(a.scale(f)),
        Value::Tensor2(m) => Value::Tensor2(m.scale(f)),
    }
}

fn add(a: Value, b: Value, minus: bool) -> Result<Value, String> {
    let b = if minus { scale(b, &neg_one(&a)) } else { b };
    Ok(match (a, b) {
        (Value::Scalar(x), Value::Scalar(y)) => Value::Scalar(&x + &y),
        (Value::Form(x), Value::Form(y)) if x.degree() == y.degree() => Value::Form(x.add(&y)),
        (Value::Multi(x), Value::Multi(y)) if x.degree() == y.degree() => Value::Multi(x.add(&y)),
        (Value::Endo(x), Value::Endo(y)) => Value::Endo(x.add(&y)),
        (Value::Tensor2(x), Value::Tensor2(y)) => Value::Tensor2(x.add(&y)),
        (x, y) if is_zero_scalar(&y) => x,
        (x, y) if is_zero_scalar(&x) => y,
        (x, y) => {
            return Err(format!(
                "cannot add a {} and a {}",
                x.describe(),
                y.describe()
            ))
        }
    })
}

fn neg_one(v: &Value) -> ScalarField {
    let ring = match v {
        Value::Scalar(s) => s.ring().clone(),
        Value::Form(a) => a.chart().ring().clone(),
        Value::Multi(p) => p.chart().ring().clone(),
        Value::Endo(a) => a.chart().ring().clone(),
        Value::Tensor2(m) => m.ring().clone(),
    };
    ScalarField::from_int(&ring, -1)
}

fn is_zero_scalar(v: &Value) -> bool {
    matches!(v, Value::Scalar(s) if s.is_zero())
}

fn mul(a: Value, b: Value) -> Result<Value, String> {
    Ok(match (a, b) {
        (Value::Scalar(s), v) | (v, Value::Scalar(s)) => scale(v, &s),
        (Value::Multi(x), Value::Form(y)) if x.degree() == 1 && y.degree() == 1 => {
            let chart = x.chart().clone();
            let (xc, yc) = (x.components().to_vec(), y.components().to_vec());
            Value::Endo(Endomorphism::from_fn(&chart, |i, j| &xc[i] * &yc[j]))
        }
        (Value::Form(x), Value::Form(y)) if x.degree() == 1 && y.degree() == 1 => {
            let chart = x.chart().clone();
            let (xc, yc) = (x.components(), y.components());
            Value::Tensor2(Matrix::from_fn(
                chart.ring(),
                chart.dim(),
                chart.dim(),
                |i, j| &xc[i] * &yc[j],
            ))
        }
        (x, y) => {
            return Err(format!(
                "cannot multiply a {} by a {}",
                x.describe(),
                y.describe()
            ))
        }
    })
}

fn wedge(a: Value, b: Value) -> Result<Value, String> {
    match (a, b) {
        (Value::Form(x), Value::Form(y)) => x.wedge(&y).map(Value::Form).map_err(|e| e.to_string()),
        (Value::Multi(x), Value::Multi(y)) => {
            x.wedge(&y).map(Value::Multi).map_err(|e| e.to_string())
        }
        (x, y) => Err(format!(
            "cannot wedge a {} with a {}",
            x.describe(),
            y.describe()
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header() -> &'static str {
        "chart M dim 3 coords x y z\npoint origin on M: x = 0, y = 0, z = 0\n"
    }

    #[test]
    fn names_join_hyphenated_pieces() {
        let f = parse(&format!(
            "{}cac flat-kahler-R4 on M {{\n F = 0\n Z = @z\n xi = dz\n}}\n",
            header()
        ))
        .unwrap();
        assert_eq!(f.structures[0].name, "flat-kahler-R4");
    }

    #[test]
    fn spaced_minus_is_not_part_of_a_name() {
        let e = parse("chart M dim 1 coords x\npoint p - q on M: x = 0\n").unwrap_err();
        assert_eq!(e.kind, ErrorKind::Syntax);
    }

    #[test]
    fn lexer_rejects_decimals() {
        let e = parse("chart M dim 1 coords x\npoint p on M: x = 1.5\n").unwrap_err();
        assert_eq!((e.kind, e.line), (ErrorKind::Lexical, 2));
    }

    #[test]
    fn newlines_inside_parentheses_continue_the_expression() {
        let f = parse(&format!(
            "{}cac c on M {{\n F = 0\n Z = @z\n xi = (dz -\n y*dx)\n}}\n",
            header()
        ))
        .unwrap();
        let Some(FieldValue::Form(xi)) = f.structures[0].field("xi") else {
            panic!()
        };
        assert_eq!(xi.degree(), 1);
    }
}
