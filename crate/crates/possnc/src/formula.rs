//! NC formula trees, the s-expression surface syntax, positions and
//! constant elimination.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub atom: Arc<str>,
    pub positive: bool,
}

impl Literal {
    pub fn new(atom: &str, positive: bool) -> Self {
        Literal { atom: Arc::from(atom), positive }
    }

    pub fn pos(atom: &str) -> Self {
        Self::new(atom, true)
    }

    pub fn neg(atom: &str) -> Self {
        Self::new(atom, false)
    }

    pub fn complement(&self) -> Self {
        Literal { atom: self.atom.clone(), positive: !self.positive }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "-{}", self.atom)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bottom,
    Lit(Literal),
    Conj(Vec<Formula>),
    Disj(Vec<Formula>),
}

impl Formula {
    pub fn pos(atom: &str) -> Self {
        Formula::Lit(Literal::pos(atom))
    }

    pub fn neg(atom: &str) -> Self {
        Formula::Lit(Literal::neg(atom))
    }

    /// The empty disjunction `(or)`.
    pub fn empty_clause() -> Self {
        Formula::Disj(Vec::new())
    }

    pub fn is_empty_clause(&self) -> bool {
        matches!(self, Formula::Disj(c) if c.is_empty())
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Formula::Lit(l) => Some(l),
            _ => None,
        }
    }

    pub fn children(&self) -> &[Formula] {
        match self {
            Formula::Conj(c) | Formula::Disj(c) => c,
            _ => &[],
        }
    }

    pub fn subformula(&self, pos: &Position) -> Option<&Formula> {
        let mut node = self;
        for &i in &pos.0 {
            node = node.children().get(i)?;
        }
        Some(node)
    }

    /// Returns a copy with the node at `pos` replaced.
    pub fn replace_at(&self, pos: &[usize], with: Formula) -> Option<Formula> {
        let Some((&head, rest)) = pos.split_first() else {
            return Some(with);
        };
        match self {
            Formula::Conj(c) | Formula::Disj(c) => {
                let child = c.get(head)?.replace_at(rest, with)?;
                let mut out = c.clone();
                out[head] = child;
                Some(match self {
                    Formula::Conj(_) => Formula::Conj(out),
                    _ => Formula::Disj(out),
                })
            }
            _ => None,
        }
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Formula::Lit(l) => {
                out.insert(l.atom.clone());
            }
            Formula::Conj(c) | Formula::Disj(c) => c.iter().for_each(|g| g.collect_atoms(out)),
            _ => {}
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Formula::Lit(_) => 1,
            Formula::Conj(c) | Formula::Disj(c) => c.iter().map(Formula::leaf_count).sum(),
            _ => 0,
        }
    }

    pub fn has_constants(&self) -> bool {
        match self {
            Formula::Top | Formula::Bottom => true,
            Formula::Lit(_) => false,
            Formula::Conj(c) | Formula::Disj(c) => c.iter().any(Formula::has_constants),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => write!(f, "true"),
            Formula::Bottom => write!(f, "false"),
            Formula::Lit(l) => write!(f, "{l}"),
            Formula::Conj(c) | Formula::Disj(c) => {
                let head = if matches!(self, Formula::Conj(_)) { "and" } else { "or" };
                write!(f, "({head}")?;
                for g in c {
                    write!(f, " {g}")?;
                }
                write!(f, ")")
            }
        }
    }
}

pub fn render(f: &Formula) -> String {
    f.to_string()
}

/// Child-index path from the root, 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn parent(&self) -> Option<Position> {
        let (_, init) = self.0.split_last()?;
        Some(Position(init.to_vec()))
    }

    /// True when `self` is `other` or lies below it.
    pub fn is_within(&self, other: &Position) -> bool {
        self.0.starts_with(&other.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Rational);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("weight {0} outside (0,1]")]
pub struct WeightRangeError(pub String);

impl Weight {
    pub fn new(value: Rational) -> Result<Self, WeightRangeError> {
        if value > Rational::zero() && value <= Rational::one() {
            Ok(Weight(value))
        } else {
            Err(WeightRangeError(format_rational(value)))
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::new(Rational::new(num, den)).expect("weight in (0,1]")
    }

    pub fn one() -> Self {
        Weight(Rational::one())
    }

    pub fn value(self) -> Rational {
        self.0
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(self.0))
    }
}

/// Shortest exact decimal when the expansion terminates, `p/q` otherwise.
pub fn format_rational(r: Rational) -> String {
    let (num, den) = (*r.numer(), *r.denom());
    let mut d = den;
    let (mut twos, mut fives) = (0u32, 0u32);
    while d % 2 == 0 {
        d /= 2;
        twos += 1;
    }
    while d % 5 == 0 {
        d /= 5;
        fives += 1;
    }
    if d != 1 {
        return format!("{num}/{den}");
    }
    let digits = twos.max(fives);
    let scale = 10i128.pow(digits);
    let scaled = num as i128 * scale / den as i128;
    let sign = if scaled < 0 { "-" } else { "" };
    let scaled = scaled.abs();
    let int = scaled / scale;
    if digits == 0 {
        return format!("{sign}{int}");
    }
    let frac = scaled % scale;
    format!("{sign}{int}.{:0width$}", frac, width = digits as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedFormula {
    pub formula: Formula,
    pub weight: Weight,
}

impl WeightedFormula {
    pub fn new(formula: Formula, weight: Weight) -> Self {
        WeightedFormula { formula, weight }
    }
}

impl fmt::Display for WeightedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {}", self.formula, self.weight)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Base {
    pub items: Vec<WeightedFormula>,
}

impl Base {
    pub fn new(items: Vec<WeightedFormula>) -> Self {
        Base { items }
    }

    pub fn push(&mut self, formula: Formula, weight: Weight) {
        self.items.push(WeightedFormula::new(formula, weight));
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn atoms(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        for it in &self.items {
            it.formula.collect_atoms(&mut out);
        }
        out
    }

    /// Distinct weights, ascending.
    pub fn weights(&self) -> Vec<Weight> {
        let set: BTreeSet<Weight> = self.items.iter().map(|i| i.weight).collect();
        set.into_iter().collect()
    }

    /// Total node count over all items.
    pub fn size(&self) -> usize {
        self.items.iter().map(|i| size(&i.formula)).sum()
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for it in &self.items {
            writeln!(f, "{it}")?;
        }
        Ok(())
    }
}

pub fn render_base(b: &Base) -> String {
    b.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character '{0}'")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected 'or' or 'and' after '('")]
    ExpectedConnective,
    #[error("negation applied to a non-proposition")]
    NegatedNonProposition,
    #[error("missing ':' before the weight")]
    MissingWeight,
    #[error("malformed weight '{0}'")]
    BadWeight(String),
    #[error(transparent)]
    WeightRange(#[from] WeightRangeError),
    #[error("trailing input after formula")]
    Trailing,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

struct Cursor<'a> {
    chars: Vec<(usize, char)>,
    idx: usize,
    line: usize,
    src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, line: usize) -> Self {
        Cursor { chars: src.char_indices().collect(), idx: 0, line, src }
    }

    fn column(&self) -> usize {
        self.idx + 1
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { line: self.line, column: self.column(), kind }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.idx += 1;
        }
    }

    fn ident(&mut self) -> &'a str {
        let start = self.chars.get(self.idx).map_or(self.src.len(), |&(b, _)| b);
        while matches!(self.peek(), Some(c) if is_ident_char(c)) {
            self.idx += 1;
        }
        let end = self.chars.get(self.idx).map_or(self.src.len(), |&(b, _)| b);
        &self.src[start..end]
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd)),
            Some('(') => {
                self.idx += 1;
                self.skip_ws();
                let at = self.idx;
                let head = self.ident();
                let conj = match head {
                    "and" => true,
                    "or" => false,
                    _ => {
                        self.idx = at;
                        return Err(self.err(ParseErrorKind::ExpectedConnective));
                    }
                };
                let mut children = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        Some(')') => {
                            self.idx += 1;
                            break;
                        }
                        None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
                        _ => children.push(self.formula()?),
                    }
                }
                Ok(if conj { Formula::Conj(children) } else { Formula::Disj(children) })
            }
            Some('-') => {
                self.idx += 1;
                let at = self.idx;
                let name = self.ident();
                if name.is_empty() || is_keyword(name) || !is_ident_start(name) {
                    self.idx = at;
                    return Err(self.err(ParseErrorKind::NegatedNonProposition));
                }
                Ok(Formula::neg(name))
            }
            Some(c) if is_ident_char(c) => {
                let at = self.idx;
                let name = self.ident();
                match name {
                    "true" => Ok(Formula::Top),
                    "false" => Ok(Formula::Bottom),
                    _ if is_keyword(name) || !is_ident_start(name) => {
                        self.idx = at;
                        Err(self.err(ParseErrorKind::UnexpectedChar(c)))
                    }
                    _ => Ok(Formula::pos(name)),
                }
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c))),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

fn is_ident_start(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "and" | "or" | "true" | "false")
}

/// Parses a single formula (no weight), e.g. a query.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut cur = Cursor::new(text, 1);
    let f = cur.formula()?;
    cur.skip_ws();
    if cur.peek().is_some() {
        return Err(cur.err(ParseErrorKind::Trailing));
    }
    Ok(f)
}

fn parse_weight(text: &str) -> Result<Weight, ParseErrorKind> {
    let bad = || ParseErrorKind::BadWeight(text.to_string());
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    if (int.is_empty() && frac.is_empty())
        || !int.chars().all(|c| c.is_ascii_digit())
        || !frac.chars().all(|c| c.is_ascii_digit())
        || frac.len() > 15
        || int.len() > 3
    {
        return Err(bad());
    }
    let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let den = 10i64.pow(frac.len() as u32);
    let frac: i64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
    Ok(Weight::new(Rational::new(int * den + frac, den))?)
}

/// Parses a base file, keeping the 1-based source line of every item.
pub fn parse_base_lines(text: &str) -> Result<Vec<(usize, WeightedFormula)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cur = Cursor::new(raw, line);
        let formula = cur.formula()?;
        cur.skip_ws();
        if cur.peek() != Some(':') {
            let kind = match cur.peek() {
                None => ParseErrorKind::MissingWeight,
                Some(_) => ParseErrorKind::Trailing,
            };
            return Err(cur.err(kind));
        }
        cur.idx += 1;
        cur.skip_ws();
        let column = cur.column();
        let rest = cur.chars.get(cur.idx).map_or("", |&(b, _)| &raw[b..]);
        let rest = rest.split('#').next().unwrap_or("").trim_end();
        let weight = parse_weight(rest).map_err(|kind| ParseError { line, column, kind })?;
        out.push((line, WeightedFormula::new(formula, weight)));
    }
    Ok(out)
}

pub fn parse_base(text: &str) -> Result<Base, ParseError> {
    Ok(Base::new(parse_base_lines(text)?.into_iter().map(|(_, w)| w).collect()))
}

pub fn negate_nnf(f: &Formula) -> Formula {
    match f {
        Formula::Top => Formula::Bottom,
        Formula::Bottom => Formula::Top,
        Formula::Lit(l) => Formula::Lit(l.complement()),
        Formula::Conj(c) => Formula::Disj(c.iter().map(negate_nnf).collect()),
        Formula::Disj(c) => Formula::Conj(c.iter().map(negate_nnf).collect()),
    }
}

/// Eliminates `true`/`false` (and empty connectives, which are constants
/// in disguise). When removing constants leaves one child, that child
/// replaces the connective.
pub fn simplify_constants(f: &Formula) -> Formula {
    match f {
        Formula::Top | Formula::Bottom | Formula::Lit(_) => f.clone(),
        Formula::Conj(c) if c.is_empty() => Formula::Top,
        Formula::Disj(c) if c.is_empty() => Formula::Bottom,
        Formula::Conj(c) | Formula::Disj(c) => {
            let conj = matches!(f, Formula::Conj(_));
            let (absorbing, neutral) =
                if conj { (Formula::Bottom, Formula::Top) } else { (Formula::Top, Formula::Bottom) };
            let mut kept = Vec::with_capacity(c.len());
            for g in c {
                let g = simplify_constants(g);
                if g == absorbing {
                    return absorbing;
                }
                if g != neutral {
                    kept.push(g);
                }
            }
            if kept.is_empty() {
                return neutral;
            }
            if kept.len() == 1 && c.len() > 1 {
                return kept.pop().unwrap();
            }
            if conj {
                Formula::Conj(kept)
            } else {
                Formula::Disj(kept)
            }
        }
    }
}

pub fn locate_literal(f: &Formula, lit: &Literal) -> Vec<Position> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    locate_rec(f, lit, &mut path, &mut out);
    out
}

fn locate_rec(f: &Formula, lit: &Literal, path: &mut Vec<usize>, out: &mut Vec<Position>) {
    match f {
        Formula::Lit(l) if l == lit => out.push(Position(path.clone())),
        Formula::Conj(c) | Formula::Disj(c) => {
            for (i, g) in c.iter().enumerate() {
                path.push(i);
                locate_rec(g, lit, path, out);
                path.pop();
            }
        }
        _ => {}
    }
}

/// All literal occurrences in document order.
pub fn literal_occurrences(f: &Formula) -> Vec<(Position, Literal)> {
    fn rec(f: &Formula, path: &mut Vec<usize>, out: &mut Vec<(Position, Literal)>) {
        match f {
            Formula::Lit(l) => out.push((Position(path.clone()), l.clone())),
            Formula::Conj(c) | Formula::Disj(c) => {
                for (i, g) in c.iter().enumerate() {
                    path.push(i);
                    rec(g, path, out);
                    path.pop();
                }
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    rec(f, &mut Vec::new(), &mut out);
    out
}

pub fn size(f: &Formula) -> usize {
    1 + f.children().iter().map(size).sum::<usize>()
}
