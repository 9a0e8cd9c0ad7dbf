//! Modal formulas over the primitive connectives `⊤`, variables, `∧`, `¬` and `□`.
//!
//! Everything else (`⊥`, `∨`, `⊃`, `◊`) is an abbreviation that expands to the
//! primitives at construction time. The printer folds the primitive patterns
//! back into the abbreviations, so `parse(print(φ)) == φ` holds structurally.
//!
//! Concrete grammar, loosest binding first:
//!
//! ```text
//! expr  := or ( "->" expr )?            right-associative
//! or    := and ( "|" and )*             left-associative
//! and   := unary ( "&" unary )*         left-associative
//! unary := "~" unary | "[]" ("^" N)? unary | "<>" ("^" N)? unary | atom
//! atom  := "T" | "F" | ident | "(" expr ")"
//! ident := [a-z][a-z0-9]*
//! ```

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Top,
    Var(String),
    And(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
    Box(Box<Formula>),
}

/// Which modal operator [`iterate`] applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Modality {
    Box,
    Diamond,
}

impl Formula {
    pub fn var(name: &str) -> Formula {
        Formula::Var(name.to_string())
    }

    pub fn bot() -> Formula {
        Formula::Top.not()
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(rhs))
    }

    /// `φ ∨ ψ = ¬(¬φ ∧ ¬ψ)`
    pub fn or(self, rhs: Formula) -> Formula {
        self.not().and(rhs.not()).not()
    }

    /// `φ ⊃ ψ = ¬(φ ∧ ¬ψ)`
    pub fn implies(self, rhs: Formula) -> Formula {
        self.and(rhs.not()).not()
    }

    pub fn boxed(self) -> Formula {
        Formula::Box(Box::new(self))
    }

    /// `◊φ = ¬□¬φ`
    pub fn diamond(self) -> Formula {
        self.not().boxed().not()
    }

    /// Number of primitive nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 1,
            Formula::And(l, r) => 1 + l.size() + r.size(),
            Formula::Not(a) | Formula::Box(a) => 1 + a.size(),
        }
    }

    /// Maximal nesting of `□`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Top | Formula::Var(_) => 0,
            Formula::And(l, r) => l.modal_depth().max(r.modal_depth()),
            Formula::Not(a) => a.modal_depth(),
            Formula::Box(a) => 1 + a.modal_depth(),
        }
    }

    /// Variables occurring in the formula, sorted.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Top => {}
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::And(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            Formula::Not(a) | Formula::Box(a) => a.collect_vars(out),
        }
    }

    /// Uniform substitution of `replacement` for every occurrence of `var`.
    pub fn substitute(&self, var: &str, replacement: &Formula) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Var(v) if v == var => replacement.clone(),
            Formula::Var(_) => self.clone(),
            Formula::And(l, r) => l
                .substitute(var, replacement)
                .and(r.substitute(var, replacement)),
            Formula::Not(a) => a.substitute(var, replacement).not(),
            Formula::Box(a) => a.substitute(var, replacement).boxed(),
        }
    }

    /// The Löb formula `□(□p ⊃ p) ⊃ □p`.
    pub fn loeb(p: &str) -> Formula {
        let p = Formula::var(p);
        p.clone()
            .boxed()
            .implies(p.clone())
            .boxed()
            .implies(p.boxed())
    }

    /// Axiom K: `□(p ⊃ q) ⊃ (□p ⊃ □q)`.
    pub fn axiom_k(p: &str, q: &str) -> Formula {
        let (p, q) = (Formula::var(p), Formula::var(q));
        p.clone()
            .implies(q.clone())
            .boxed()
            .implies(p.boxed().implies(q.boxed()))
    }

    /// Axiom 4: `□p ⊃ □□p`.
    pub fn axiom_4(p: &str) -> Formula {
        let p = Formula::var(p);
        p.clone().boxed().implies(p.boxed().boxed())
    }
}

/// `n` nested applications of `op` to `phi`.
pub fn iterate(op: Modality, n: usize, phi: Formula) -> Formula {
    (0..n).fold(phi, |acc, _| match op {
        Modality::Box => acc.boxed(),
        Modality::Diamond => acc.diamond(),
    })
}

/// All subtrees of `phi`, including `phi` itself, deduplicated.
pub fn subformulas(phi: &Formula) -> BTreeSet<Formula> {
    let mut out = BTreeSet::new();
    let mut stack = vec![phi];
    while let Some(f) = stack.pop() {
        if !out.insert(f.clone()) {
            continue;
        }
        match f {
            Formula::Top | Formula::Var(_) => {}
            Formula::And(l, r) => {
                stack.push(l);
                stack.push(r);
            }
            Formula::Not(a) | Formula::Box(a) => stack.push(a),
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at position {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Top,
    Bot,
    Ident(String),
    Number(usize),
    Tilde,
    BoxOp,
    DiamondOp,
    Caret,
    And,
    Or,
    Arrow,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |position: usize, message: &str| ParseError {
        position,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'T' => {
                i += 1;
                Token::Top
            }
            b'F' => {
                i += 1;
                Token::Bot
            }
            b'~' => {
                i += 1;
                Token::Tilde
            }
            b'^' => {
                i += 1;
                Token::Caret
            }
            b'&' => {
                i += 1;
                Token::And
            }
            b'|' => {
                i += 1;
                Token::Or
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b'[' => {
                if bytes.get(i + 1) != Some(&b']') {
                    return Err(err(i, "expected `[]`"));
                }
                i += 2;
                Token::BoxOp
            }
            b'<' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err(i, "expected `<>`"));
                }
                i += 2;
                Token::DiamondOp
            }
            b'-' => {
                if bytes.get(i + 1) != Some(&b'>') {
                    return Err(err(i, "expected `->`"));
                }
                i += 2;
                Token::Arrow
            }
            b'a'..=b'z' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_lowercase() || bytes[i].is_ascii_digit())
                {
                    i += 1;
                }
                Token::Ident(text[start..i].to_string())
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "iteration count out of range"))?;
                Token::Number(n)
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, &format!("unexpected character `{ch}`")));
            }
        };
        out.push((start, tok));
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            position: self.offset(),
            message: message.into(),
        }
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if self.eat(&Token::Arrow) {
            let rhs = self.expr()?;
            Ok(lhs.implies(rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while self.eat(&Token::Or) {
            acc = acc.or(self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Token::And) {
            acc = acc.and(self.unary()?);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<usize, ParseError> {
        if !self.eat(&Token::Caret) {
            return Ok(1);
        }
        match self.peek() {
            Some(Token::Number(n)) => {
                let n = *n;
                self.pos += 1;
                Ok(n)
            }
            _ => Err(self.error("expected iteration count after `^`")),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(Token::Tilde) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Token::BoxOp) => {
                self.pos += 1;
                let n = self.exponent()?;
                Ok(iterate(Modality::Box, n, self.unary()?))
            }
            Some(Token::DiamondOp) => {
                self.pos += 1;
                let n = self.exponent()?;
                Ok(iterate(Modality::Diamond, n, self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let tok = self.peek().cloned();
        match tok {
            Some(Token::Top) => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(Token::Bot) => {
                self.pos += 1;
                Ok(Formula::bot())
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Formula::Var(name))
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(&Token::RParen) {
                    return Err(self.error("expected `)`"));
                }
                Ok(inner)
            }
            Some(_) => Err(self.error("expected a formula")),
            None => Err(self.error("unexpected end of input")),
        }
    }
}

pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
    };
    let phi = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(parser.error("trailing input"));
    }
    Ok(phi)
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

// Printing view: the primitive tree with abbreviations folded back in.
enum View<'a> {
    Top,
    Bot,
    Var(&'a str),
    Not(&'a Formula),
    Box(&'a Formula),
    Diamond(&'a Formula),
    And(&'a Formula, &'a Formula),
    Or(&'a Formula, &'a Formula),
    Implies(&'a Formula, &'a Formula),
}

fn view(phi: &Formula) -> View<'_> {
    match phi {
        Formula::Top => View::Top,
        Formula::Var(v) => View::Var(v),
        Formula::And(l, r) => View::And(l, r),
        Formula::Box(a) => View::Box(a),
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Top => View::Bot,
            Formula::And(l, r) => match (l.as_ref(), r.as_ref()) {
                (Formula::Not(a), Formula::Not(b)) => View::Or(a, b),
                (a, Formula::Not(b)) => View::Implies(a, b),
                _ => View::Not(inner),
            },
            Formula::Box(b) => match b.as_ref() {
                Formula::Not(a) => View::Diamond(a),
                _ => View::Not(inner),
            },
            _ => View::Not(inner),
        },
    }
}

const PREC_IMPLIES: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn precedence(phi: &Formula) -> u8 {
    match view(phi) {
        View::Implies(..) => PREC_IMPLIES,
        View::Or(..) => PREC_OR,
        View::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    if precedence(phi) < min {
        write!(f, "(")?;
        write_formula(f, phi)?;
        write!(f, ")")
    } else {
        write_formula(f, phi)
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    match view(phi) {
        View::Top => write!(f, "T"),
        View::Bot => write!(f, "F"),
        View::Var(v) => write!(f, "{v}"),
        View::Not(a) => {
            write!(f, "~")?;
            write_at(f, a, PREC_UNARY)
        }
        View::Box(a) => {
            write!(f, "[]")?;
            write_at(f, a, PREC_UNARY)
        }
        View::Diamond(a) => {
            write!(f, "<>")?;
            write_at(f, a, PREC_UNARY)
        }
        View::And(l, r) => {
            write_at(f, l, PREC_AND)?;
            write!(f, " & ")?;
            write_at(f, r, PREC_UNARY)
        }
        View::Or(l, r) => {
            write_at(f, l, PREC_OR)?;
            write!(f, " | ")?;
            write_at(f, r, PREC_AND)
        }
        View::Implies(l, r) => {
            write_at(f, l, PREC_OR)?;
            write!(f, " -> ")?;
            write_at(f, r, PREC_IMPLIES)
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self)
    }
}

/// Canonical text of `phi`.
pub fn print(phi: &Formula) -> String {
    phi.to_string()
}

// Formulas travel through JSON as their printed text.
impl serde::Serialize for Formula {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Formula {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse(&text).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::var("p")
    }

    #[test]
    fn parses_constants() {
        assert_eq!(parse("T").unwrap(), Formula::Top);
        assert_eq!(parse("F").unwrap(), Formula::Top.not());
    }

    #[test]
    fn parses_loeb_formula_into_primitives() {
        let expected = Formula::Not(Box::new(Formula::And(
            Box::new(Formula::Box(Box::new(Formula::Not(Box::new(
                Formula::And(
                    Box::new(Formula::Box(Box::new(p()))),
                    Box::new(Formula::Not(Box::new(p()))),
                ),
            ))))),
            Box::new(Formula::Not(Box::new(Formula::Box(Box::new(p()))))),
        )));
        assert_eq!(parse("[]([]p -> p) -> []p").unwrap(), expected);
        assert_eq!(Formula::loeb("p"), expected);
    }

    #[test]
    fn diamond_power_sugar_matches_manual_nesting() {
        // ¬□¬¬□¬¬□¬⊤, built by hand
        let manual = Formula::Top
            .not()
            .boxed()
            .not()
            .not()
            .boxed()
            .not()
            .not()
            .boxed()
            .not();
        assert_eq!(parse("<>^3 T").unwrap(), manual);
        assert_eq!(parse("<><><>T").unwrap(), manual);
        assert_eq!(parse("[]^2p").unwrap(), p().boxed().boxed());
        assert_eq!(parse("[]^0 p").unwrap(), p());
    }

    #[test]
    fn precedence_and_associativity() {
        let (q, r) = (Formula::var("q"), Formula::var("r"));
        assert_eq!(
            parse("p -> q -> r").unwrap(),
            p().implies(q.clone().implies(r.clone()))
        );
        assert_eq!(
            parse("p | q & r").unwrap(),
            p().or(q.clone().and(r.clone()))
        );
        assert_eq!(
            parse("p & q | r -> p").unwrap(),
            p().and(q.clone()).or(r.clone()).implies(p())
        );
        assert_eq!(
            parse("p & q & r").unwrap(),
            p().and(q.clone()).and(r.clone())
        );
        assert_eq!(parse("~[]p & q").unwrap(), p().boxed().not().and(q));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let e = parse("((p").unwrap_err();
        assert_eq!(e.position, 3);
        let e = parse("p & ").unwrap_err();
        assert_eq!(e.position, 4);
        let e = parse("p $ q").unwrap_err();
        assert_eq!(e.position, 2);
        assert!(parse("p q").is_err());
        assert!(parse("[p").is_err());
        assert!(parse("<>^ p").is_err());
        assert!(parse("P").is_err());
        assert!(parse("").is_err());
    }

    #[test]
    fn prints_canonical_forms() {
        assert_eq!(print(&Formula::Top), "T");
        assert_eq!(print(&Formula::Top.not()), "F");
        assert_eq!(print(&p().boxed()), "[]p");
        assert_eq!(print(&Formula::loeb("p")), "[]([]p -> p) -> []p");
        assert_eq!(print(&Formula::Top.diamond()), "<>T");
        assert_eq!(print(&p().not()), "~p");
        assert_eq!(print(&p().or(Formula::var("q")).and(p())), "(p | q) & p");
    }

    #[test]
    fn subformulas_examples() {
        assert_eq!(subformulas(&p()), BTreeSet::from([p()]));
        let conj = p().and(p().boxed());
        assert_eq!(
            subformulas(&conj),
            BTreeSet::from([p(), p().boxed(), conj.clone()])
        );
    }

    #[test]
    fn loeb_subformula_count() {
        // Hand enumeration of ¬(□¬(□p∧¬p) ∧ ¬□p):
        //   the whole formula, its conjunction, □¬(□p∧¬p), ¬(□p∧¬p),
        //   □p∧¬p, □p, p, ¬p, ¬□p.
        let set = subformulas(&Formula::loeb("p"));
        assert_eq!(set.len(), 9);
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(iterate(Modality::Box, 0, p()), p());
        assert_eq!(
            iterate(Modality::Diamond, 2, Formula::Top),
            Formula::Top.diamond().diamond()
        );
        assert_eq!(
            iterate(Modality::Box, 3, Formula::bot()),
            Formula::bot().boxed().boxed().boxed()
        );
    }

    #[test]
    fn substitution_replaces_every_occurrence() {
        let phi = parse("p & []p").unwrap();
        let out = phi.substitute("p", &parse("q | r").unwrap());
        assert_eq!(out, parse("(q | r) & [](q | r)").unwrap());
    }
}
