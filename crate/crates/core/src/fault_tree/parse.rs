//! Text format for fault trees: `;`-terminated statements, `#` line comments,
//! whitespace-insensitive.
//!
//! ```text
//! file  := stmt+
//! stmt  := "toplevel" NAME ";"
//!        | NAME gate NAME+ ";"
//!        | NAME "prob" "=" FLOAT ";"
//! gate  := "and" | "or" | INT "of" INT       (k of N; N must equal child count)
//! NAME  := [A-Za-z_][A-Za-z0-9_]*
//! FLOAT := decimal or scientific notation
//! ```
//!
//! `2of3` and `2 of 3` are both accepted for VOT gates.

use crate::error::{Error, Result};

use super::{FaultTree, FtNode, GateKind, NodeKind, RawKind};

const KEYWORDS: [&str; 5] = ["toplevel", "and", "or", "prob", "of"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(String),
    Keyword(&'static str),
    Int(usize),
    Float(f64),
    /// Fused `KofN` written without spaces.
    Vot(usize, usize),
    Semi,
    Eq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn error(&self, line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn tokenize(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
                continue;
            }
            let (line, col) = (self.line, self.col);
            let tok = match c {
                ';' => {
                    self.bump();
                    Tok::Semi
                }
                '=' => {
                    self.bump();
                    Tok::Eq
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let word = self.scan_word();
                    match KEYWORDS.iter().find(|&&k| k == word) {
                        Some(k) => Tok::Keyword(k),
                        None => Tok::Name(word),
                    }
                }
                c if c.is_ascii_digit() || c == '.' => self.scan_number(line, col)?,
                c => return Err(self.error(line, col, format!("unexpected character `{c}`"))),
            };
            out.push(Token { tok, line, col });
        }
        Ok(out)
    }

    fn scan_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        word
    }

    fn scan_digits(&mut self, into: &mut String) {
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_digit() {
                into.push(c);
                self.bump();
            } else {
                break;
            }
        }
    }

    fn scan_number(&mut self, line: usize, col: usize) -> Result<Tok> {
        let mut text = String::new();
        self.scan_digits(&mut text);

        // Fused VOT form: digits immediately followed by `of` and digits.
        if !text.is_empty() && self.chars.peek() == Some(&'o') {
            self.bump();
            if self.chars.peek() != Some(&'f') {
                return Err(self.error(line, col, format!("malformed token starting `{text}o`")));
            }
            self.bump();
            let mut n = String::new();
            self.scan_digits(&mut n);
            if n.is_empty() {
                return Err(self.error(line, col, "expected child count after `of`"));
            }
            let k = text.parse().map_err(|_| self.error(line, col, "bad k"))?;
            let n = n.parse().map_err(|_| self.error(line, col, "bad N"))?;
            return Ok(Tok::Vot(k, n));
        }

        let mut is_float = false;
        if self.chars.peek() == Some(&'.') {
            is_float = true;
            text.push('.');
            self.bump();
            self.scan_digits(&mut text);
        }
        if matches!(self.chars.peek(), Some('e') | Some('E')) {
            is_float = true;
            text.push('e');
            self.bump();
            if matches!(self.chars.peek(), Some('+') | Some('-')) {
                text.push(self.bump().unwrap());
            }
            let before = text.len();
            self.scan_digits(&mut text);
            if text.len() == before {
                return Err(self.error(line, col, "missing exponent digits"));
            }
        }
        if text == "." || text.is_empty() {
            return Err(self.error(line, col, "malformed number"));
        }
        if is_float {
            let value: f64 = text
                .parse()
                .map_err(|_| self.error(line, col, format!("malformed number `{text}`")))?;
            Ok(Tok::Float(value))
        } else {
            let value: usize = text
                .parse()
                .map_err(|_| self.error(line, col, format!("integer out of range `{text}`")))?;
            Ok(Tok::Int(value))
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self
            .tokens
            .get(self.pos.min(self.tokens.len().saturating_sub(1)))
            .map(|t| (t.line, t.col))
            .unwrap_or((1, 1));
        Error::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    fn expect_semi(&mut self) -> Result<()> {
        match self.next() {
            Some(Token { tok: Tok::Semi, .. }) => Ok(()),
            Some(t) => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected `;`, found {}", describe(&t.tok)),
            }),
            None => Err(self.error_here("expected `;`, found end of input")),
        }
    }

    fn expect_name(&mut self) -> Result<String> {
        match self.next() {
            Some(Token { tok: Tok::Name(n), .. }) => Ok(n),
            Some(t) => Err(Error::Syntax {
                line: t.line,
                col: t.col,
                msg: format!("expected a name, found {}", describe(&t.tok)),
            }),
            None => Err(self.error_here("expected a name, found end of input")),
        }
    }

    fn name_list(&mut self) -> Result<Vec<String>> {
        let mut names = Vec::new();
        while let Some(Token { tok: Tok::Name(_), .. }) = self.peek() {
            names.push(self.expect_name()?);
        }
        if names.is_empty() {
            return Err(self.error_here("expected at least one child name"));
        }
        self.expect_semi()?;
        Ok(names)
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Name(n) => format!("name `{n}`"),
        Tok::Keyword(k) => format!("keyword `{k}`"),
        Tok::Int(i) => format!("integer `{i}`"),
        Tok::Float(f) => format!("number `{f}`"),
        Tok::Vot(k, n) => format!("`{k}of{n}`"),
        Tok::Semi => "`;`".to_string(),
        Tok::Eq => "`=`".to_string(),
    }
}

pub(super) fn parse(text: &str) -> Result<FaultTree> {
    let tokens = Lexer::new(text).tokenize()?;
    let mut parser = Parser { tokens, pos: 0 };
    let mut defs: Vec<(String, RawKind)> = Vec::new();
    let mut top: Option<String> = None;

    while parser.peek().is_some() {
        let t = parser.next().unwrap();
        match t.tok {
            Tok::Keyword("toplevel") => {
                let name = parser.expect_name()?;
                parser.expect_semi()?;
                if top.replace(name).is_some() {
                    return Err(Error::DuplicateDefinition("toplevel".to_string()));
                }
            }
            Tok::Name(name) => {
                let head = parser.next().ok_or_else(|| {
                    parser.error_here("expected a gate kind or `prob` after name")
                })?;
                match head.tok {
                    Tok::Keyword("prob") => {
                        match parser.next() {
                            Some(Token { tok: Tok::Eq, .. }) => {}
                            _ => {
                                return Err(Error::Syntax {
                                    line: head.line,
                                    col: head.col,
                                    msg: "expected `=` after `prob`".to_string(),
                                })
                            }
                        }
                        let value = match parser.next() {
                            Some(Token { tok: Tok::Float(f), .. }) => f,
                            Some(Token { tok: Tok::Int(i), .. }) => i as f64,
                            Some(t) => {
                                return Err(Error::Syntax {
                                    line: t.line,
                                    col: t.col,
                                    msg: format!("expected a probability, found {}", describe(&t.tok)),
                                })
                            }
                            None => return Err(parser.error_here("expected a probability")),
                        };
                        parser.expect_semi()?;
                        defs.push((name, RawKind::Basic { prob: value }));
                    }
                    Tok::Keyword("and") => {
                        let children = parser.name_list()?;
                        defs.push((name, RawKind::Gate { kind: GateKind::And, children }));
                    }
                    Tok::Keyword("or") => {
                        let children = parser.name_list()?;
                        defs.push((name, RawKind::Gate { kind: GateKind::Or, children }));
                    }
                    Tok::Vot(k, n) => {
                        let children = parser.name_list()?;
                        vot_def(&mut defs, name, k, n, children)?;
                    }
                    Tok::Int(k) => {
                        // Spaced form: INT "of" INT.
                        match parser.next() {
                            Some(Token { tok: Tok::Keyword("of"), .. }) => {}
                            _ => {
                                return Err(Error::Syntax {
                                    line: head.line,
                                    col: head.col,
                                    msg: "expected `of` after the VOT threshold".to_string(),
                                })
                            }
                        }
                        let n = match parser.next() {
                            Some(Token { tok: Tok::Int(n), .. }) => n,
                            _ => {
                                return Err(Error::Syntax {
                                    line: head.line,
                                    col: head.col,
                                    msg: "expected a child count after `of`".to_string(),
                                })
                            }
                        };
                        let children = parser.name_list()?;
                        vot_def(&mut defs, name, k, n, children)?;
                    }
                    other => {
                        return Err(Error::Syntax {
                            line: head.line,
                            col: head.col,
                            msg: format!(
                                "expected `and`, `or`, `prob`, or `k of N`, found {}",
                                describe(&other)
                            ),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Syntax {
                    line: t.line,
                    col: t.col,
                    msg: format!("expected a statement, found {}", describe(&other)),
                })
            }
        }
    }

    let top = top.ok_or(Error::MissingTop)?;
    FaultTree::construct(defs, top)
}

fn vot_def(
    defs: &mut Vec<(String, RawKind)>,
    name: String,
    k: usize,
    n: usize,
    children: Vec<String>,
) -> Result<()> {
    if n != children.len() {
        return Err(Error::BadArity {
            gate: name,
            msg: format!("VOT declares N={n} but lists {} children", children.len()),
        });
    }
    defs.push((
        name,
        RawKind::Gate {
            kind: GateKind::AtLeast(k),
            children,
        },
    ));
    Ok(())
}

pub(super) fn render(ft: &FaultTree) -> String {
    let mut out = format!("toplevel {};\n", ft.top_name());
    for node in ft.nodes() {
        render_node(&mut out, ft, node);
    }
    out
}

fn render_node(out: &mut String, ft: &FaultTree, node: &FtNode) {
    match node.kind() {
        NodeKind::Basic { prob, .. } => {
            out.push_str(&format!("{} prob={};\n", node.name(), prob));
        }
        NodeKind::Gate { kind, children } => {
            let gate = match kind {
                GateKind::And => "and".to_string(),
                GateKind::Or => "or".to_string(),
                GateKind::AtLeast(k) => format!("{}of{}", k, children.len()),
            };
            let names: Vec<&str> = children.iter().map(|&c| ft.node(c).name()).collect();
            out.push_str(&format!("{} {} {};\n", node.name(), gate, names.join(" ")));
        }
    }
}
