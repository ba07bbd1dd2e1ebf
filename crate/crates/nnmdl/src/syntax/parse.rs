//! Recursive-descent parser with backtracking between the formula alternatives.
//!
//! Concrete syntax:
//!
//! ```text
//! concept ::= NAME | top | bot | ~concept | (concept & concept) | (concept | concept)
//!           | some ROLE.concept | all ROLE.concept | [i]concept | <i>concept
//! formula ::= concept(IND) | ROLE(IND, IND) | ~formula | (concept sub concept)
//!           | (formula /\ formula) | (formula \/ formula) | (formula)
//!           | [i]formula | <i>formula
//! ```
//!
//! Concept names start with an upper-case letter, role and individual names
//! with a lower-case letter. `#` starts a comment that runs to the end of the
//! line.

use super::{Agent, Concept, Formula, RESERVED_CONCEPT};
use thiserror::Error;

/// Errors reported by the parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("empty input")]
    Empty,
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("agent index {agent} at line {line}, column {column} is outside 1..={n_agents}")]
    AgentOutOfRange {
        agent: u64,
        n_agents: Agent,
        line: usize,
        column: usize,
    },
    #[error("concept name `{}` at line {line}, column {column} is reserved", RESERVED_CONCEPT)]
    Reserved { line: usize, column: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Upper(String),
    Lower(String),
    Int(u64),
    Top,
    Bot,
    Some,
    All,
    SubKw,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Lt,
    Gt,
    Amp,
    Bar,
    Tilde,
    Dot,
    Comma,
    Wedge,
    Vee,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Upper(s) | Tok::Lower(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Top => "`top`".into(),
            Tok::Bot => "`bot`".into(),
            Tok::Some => "`some`".into(),
            Tok::All => "`all`".into(),
            Tok::SubKw => "`sub`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Lt => "`<`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Wedge => "`/\\`".into(),
            Tok::Vee => "`\\/`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(input: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut column) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, column);
        let push = |tok: Tok, out: &mut Vec<Token>| out.push(Token { tok, line: tl, column: tc });
        if c == '\n' {
            i += 1;
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            column += i - start;
            let tok = match word.as_str() {
                "top" => Tok::Top,
                "bot" => Tok::Bot,
                "some" => Tok::Some,
                "all" => Tok::All,
                "sub" => Tok::SubKw,
                _ if c.is_ascii_uppercase() => {
                    if word == RESERVED_CONCEPT {
                        return Err(SyntaxError::Reserved { line: tl, column: tc });
                    }
                    Tok::Upper(word)
                }
                _ => Tok::Lower(word),
            };
            push(tok, &mut out);
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            column += i - start;
            let n = digits.parse::<u64>().unwrap_or(u64::MAX);
            push(Tok::Int(n), &mut out);
            continue;
        }
        let two = |d: char| i + 1 < chars.len() && chars[i + 1] == d;
        let (tok, width) = match c {
            '(' => (Tok::LParen, 1),
            ')' => (Tok::RParen, 1),
            '[' => (Tok::LBrack, 1),
            ']' => (Tok::RBrack, 1),
            '<' => (Tok::Lt, 1),
            '>' => (Tok::Gt, 1),
            '&' => (Tok::Amp, 1),
            '|' => (Tok::Bar, 1),
            '~' => (Tok::Tilde, 1),
            '.' => (Tok::Dot, 1),
            ',' => (Tok::Comma, 1),
            '/' if two('\\') => (Tok::Wedge, 2),
            '\\' if two('/') => (Tok::Vee, 2),
            _ => {
                return Err(SyntaxError::Syntax {
                    line: tl,
                    column: tc,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        push(tok, &mut out);
        i += width;
        column += width;
    }
    out.push(Token { tok: Tok::Eof, line, column });
    Ok(out)
}

enum Fail {
    /// Recoverable failure at a token position; another alternative may apply.
    Soft,
    /// Error that no alternative can repair.
    Hard(SyntaxError),
}

type PResult<T> = Result<T, Fail>;

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    n_agents: Agent,
    furthest: usize,
    expected: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn fail<T>(&mut self, what: &str) -> PResult<T> {
        if self.pos > self.furthest {
            self.furthest = self.pos;
            self.expected.clear();
        }
        if self.pos == self.furthest && !self.expected.iter().any(|e| e == what) {
            self.expected.push(what.to_string());
        }
        Err(Fail::Soft)
    }

    fn eat(&mut self, t: Tok, what: &str) -> PResult<()> {
        if *self.peek() == t {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn lower(&mut self, what: &str) -> PResult<String> {
        if let Tok::Lower(s) = self.peek().clone() {
            self.pos += 1;
            Ok(s)
        } else {
            self.fail(what)
        }
    }

    fn agent(&mut self) -> PResult<Agent> {
        let tok = &self.toks[self.pos];
        if let Tok::Int(n) = tok.tok {
            if n == 0 || n > self.n_agents as u64 {
                return Err(Fail::Hard(SyntaxError::AgentOutOfRange {
                    agent: n,
                    n_agents: self.n_agents,
                    line: tok.line,
                    column: tok.column,
                }));
            }
            self.pos += 1;
            Ok(n as Agent)
        } else {
            self.fail("agent index")
        }
    }

    fn error(&self) -> SyntaxError {
        let tok = &self.toks[self.furthest];
        let message = if self.expected.is_empty() {
            format!("unexpected {}", tok.tok.describe())
        } else {
            format!("expected {}, found {}", self.expected.join(" or "), tok.tok.describe())
        };
        SyntaxError::Syntax {
            line: tok.line,
            column: tok.column,
            message,
        }
    }

    fn concept(&mut self) -> PResult<Concept> {
        match self.peek().clone() {
            Tok::Upper(name) => {
                self.pos += 1;
                Ok(Concept::Name(name))
            }
            Tok::Top => {
                self.pos += 1;
                Ok(Concept::Top)
            }
            Tok::Bot => {
                self.pos += 1;
                Ok(Concept::Bot)
            }
            Tok::Tilde => {
                self.pos += 1;
                Ok(Concept::not(self.concept()?))
            }
            Tok::LParen => {
                self.pos += 1;
                let a = self.concept()?;
                let and = match self.peek() {
                    Tok::Amp => true,
                    Tok::Bar => false,
                    _ => return self.fail("`&` or `|`"),
                };
                self.pos += 1;
                let b = self.concept()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(if and { Concept::and(a, b) } else { Concept::or(a, b) })
            }
            Tok::Some | Tok::All => {
                let exists = *self.peek() == Tok::Some;
                self.pos += 1;
                let r = self.lower("role name")?;
                self.eat(Tok::Dot, "`.`")?;
                let c = self.concept()?;
                Ok(if exists { Concept::exists(&r, c) } else { Concept::forall(&r, c) })
            }
            Tok::LBrack => {
                self.pos += 1;
                let i = self.agent()?;
                self.eat(Tok::RBrack, "`]`")?;
                Ok(Concept::boxed(i, self.concept()?))
            }
            Tok::Lt => {
                self.pos += 1;
                let i = self.agent()?;
                self.eat(Tok::Gt, "`>`")?;
                Ok(Concept::diamond(i, self.concept()?))
            }
            _ => self.fail("concept"),
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let start = self.pos;
        match self.concept() {
            Ok(c) => {
                if *self.peek() == Tok::LParen {
                    if let Tok::Lower(a) = self.peek_at(1).clone() {
                        if *self.peek_at(2) == Tok::RParen {
                            self.pos += 3;
                            return Ok(Formula::Assert(c, a));
                        }
                    }
                }
                let _ = self.fail::<()>("`(` individual `)`");
            }
            Err(Fail::Hard(e)) => return Err(Fail::Hard(e)),
            Err(Fail::Soft) => {}
        }
        self.pos = start;
        match self.peek().clone() {
            Tok::Lower(r) => {
                self.pos += 1;
                self.eat(Tok::LParen, "`(`")?;
                let a = self.lower("individual name")?;
                self.eat(Tok::Comma, "`,`")?;
                let b = self.lower("individual name")?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(Formula::Role(r, a, b))
            }
            Tok::Tilde => {
                self.pos += 1;
                Ok(match self.formula()? {
                    Formula::Role(r, a, b) => Formula::NegRole(r, a, b),
                    f => Formula::not(f),
                })
            }
            Tok::LParen => {
                self.pos += 1;
                let inner = self.pos;
                match self.inclusion() {
                    Ok(f) => return Ok(f),
                    Err(Fail::Hard(e)) => return Err(Fail::Hard(e)),
                    Err(Fail::Soft) => self.pos = inner,
                }
                let a = self.formula()?;
                let and = match self.peek() {
                    Tok::RParen => {
                        self.pos += 1;
                        return Ok(a);
                    }
                    Tok::Wedge => true,
                    Tok::Vee => false,
                    _ => return self.fail("`/\\` or `\\/` or `)`"),
                };
                self.pos += 1;
                let b = self.formula()?;
                self.eat(Tok::RParen, "`)`")?;
                Ok(if and { Formula::and(a, b) } else { Formula::or(a, b) })
            }
            Tok::LBrack => {
                self.pos += 1;
                let i = self.agent()?;
                self.eat(Tok::RBrack, "`]`")?;
                Ok(Formula::boxed(i, self.formula()?))
            }
            Tok::Lt => {
                self.pos += 1;
                let i = self.agent()?;
                self.eat(Tok::Gt, "`>`")?;
                Ok(Formula::diamond(i, self.formula()?))
            }
            _ => self.fail("formula"),
        }
    }

    /// The tail `concept sub concept )` of a parenthesised inclusion.
    fn inclusion(&mut self) -> PResult<Formula> {
        let a = self.concept()?;
        self.eat(Tok::SubKw, "`sub`")?;
        let b = self.concept()?;
        self.eat(Tok::RParen, "`)`")?;
        Ok(Formula::Sub(a, b))
    }
}

fn run<T>(
    input: &str,
    n_agents: Agent,
    f: impl FnOnce(&mut Parser) -> PResult<T>,
) -> Result<T, SyntaxError> {
    let toks = lex(input)?;
    if toks.len() == 1 {
        return Err(SyntaxError::Empty);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        n_agents,
        furthest: 0,
        expected: Vec::new(),
    };
    match f(&mut p) {
        Ok(v) if *p.peek() == Tok::Eof => Ok(v),
        Ok(_) => {
            let _ = p.fail::<()>("end of input");
            Err(p.error())
        }
        Err(Fail::Hard(e)) => Err(e),
        Err(Fail::Soft) => Err(p.error()),
    }
}

/// Parses a formula whose modal operators use agents in `1..=n_agents`.
pub fn parse_formula(input: &str, n_agents: Agent) -> Result<Formula, SyntaxError> {
    run(input, n_agents, |p| p.formula())
}

/// Parses a concept whose modal operators use agents in `1..=n_agents`.
pub fn parse_concept(input: &str, n_agents: Agent) -> Result<Concept, SyntaxError> {
    run(input, n_agents, |p| p.concept())
}
