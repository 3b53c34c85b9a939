use std::fmt;

use num_traits::Zero;

use super::lexer::Span;
use crate::fd_algebra::MatrixUnit;
use crate::scalar::GaussRat;

/// A name with the position it was written at; equality ignores the position.
#[derive(Debug, Clone, Eq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident { name: name.into(), span: Span::default() }
    }
}

impl PartialEq for Ident {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Polynomial syntax. Literals are nonnegative reals or nonnegative
/// imaginaries; signs are [`Expr::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(GaussRat),
    Name(Ident),
    Unit(MatrixUnit),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Star(Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Neg(_) => 1,
            Expr::Mul(..) => 2,
            Expr::Star(_) | Expr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn write_operand(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

fn write_literal(f: &mut fmt::Formatter<'_>, c: &GaussRat) -> fmt::Result {
    let q = if c.im().is_zero() { c.re() } else { c.im() };
    if q.is_integer() {
        write!(f, "{}", q.numer())?;
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())?;
    }
    if c.im().is_zero() { Ok(()) } else { f.write_str("i") }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(c) => write_literal(f, c),
            Expr::Name(n) => write!(f, "{n}"),
            Expr::Unit(u) => write!(f, "{u}"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_operand(f, 2)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_operand(f, 0)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_operand(f, 1)
            }
            Expr::Mul(a, b) => {
                a.write_operand(f, 2)?;
                f.write_str(" ")?;
                b.write_operand(f, 3)
            }
            Expr::Star(a) => {
                a.write_operand(f, 3)?;
                f.write_str("^*")
            }
            Expr::Pow(a, n) => {
                a.write_operand(f, 3)?;
                write!(f, "^{n}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorDecl {
    pub name: Ident,
    pub self_adjoint: bool,
}

/// `lhs = rhs`, or `lhs` alone for `lhs = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationSyntax {
    pub lhs: Expr,
    pub rhs: Option<Expr>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlgebraDef {
    Blocks(Vec<usize>),
    Present { generators: Vec<GeneratorDecl>, relations: Vec<RelationSyntax> },
    Tensor(Vec<Ident>),
    Sum(Vec<Ident>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum ImageKey {
    Unit(MatrixUnit),
    Name(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub enum HomDef {
    Identity,
    Images(Vec<(ImageKey, Expr)>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CheckSpec {
    ExpLaw { b: Ident, c1: Ident, c2: Ident },
    Coassoc { m: Ident },
    Functor { f: Ident, f2: Ident, g: Ident, g2: Ident },
    Surjective { f: Ident, c: Ident },
    SliceLemma { count: usize, max_dim: Option<usize> },
    DirSum { bs: Vec<Ident>, cs: Vec<Ident> },
    TensorSplit { b1: Ident, b2: Ident, c: Ident },
    Recovery { b: Ident },
    Classical { m: usize, n: usize },
    WellDefined { h: Ident },
}

impl CheckSpec {
    pub const KINDS: [&'static str; 10] = [
        "explaw",
        "coassoc",
        "functor",
        "surjective",
        "slice-lemma",
        "dirsum",
        "tensorsplit",
        "recovery",
        "classical",
        "welldef",
    ];

    pub fn kind(&self) -> &'static str {
        match self {
            CheckSpec::ExpLaw { .. } => "explaw",
            CheckSpec::Coassoc { .. } => "coassoc",
            CheckSpec::Functor { .. } => "functor",
            CheckSpec::Surjective { .. } => "surjective",
            CheckSpec::SliceLemma { .. } => "slice-lemma",
            CheckSpec::DirSum { .. } => "dirsum",
            CheckSpec::TensorSplit { .. } => "tensorsplit",
            CheckSpec::Recovery { .. } => "recovery",
            CheckSpec::Classical { .. } => "classical",
            CheckSpec::WellDefined { .. } => "welldef",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RepSearchArgs {
    pub dim: usize,
    pub restarts: Option<usize>,
    pub iterations: Option<usize>,
    pub noncommutative: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Algebra { name: Ident, def: AlgebraDef },
    Hom { name: Ident, source: Ident, target: Ident, def: HomDef },
    Mor { name: Ident, source: Ident, target: Ident },
    Check(CheckSpec),
    Abelianize(Ident),
    Characters(Ident),
    RepSearch { name: Ident, args: RepSearchArgs },
    Show(Ident),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Located {
    pub statement: Statement,
    pub span: Span,
}

/// A parsed workspace file; `Display` is the canonical pretty-printer.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Program {
    pub statements: Vec<Located>,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

impl fmt::Display for RelationSyntax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.rhs {
            Some(r) => write!(f, "{} = {r}", self.lhs),
            None => write!(f, "{}", self.lhs),
        }
    }
}

impl fmt::Display for GeneratorDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.name, if self.self_adjoint { "!" } else { "" })
    }
}

impl fmt::Display for AlgebraDef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraDef::Blocks(b) => {
                let parts: Vec<String> = b.iter().map(ToString::to_string).collect();
                write!(f, "blocks [{}]", parts.join(","))
            }
            AlgebraDef::Present { generators, relations } if relations.is_empty() => {
                write!(f, "present < {} >", join(generators))
            }
            AlgebraDef::Present { generators, relations } => {
                write!(f, "present < {} | {} >", join(generators), join(relations))
            }
            AlgebraDef::Tensor(parts) => write!(f, "tensor [{}]", join(parts)),
            AlgebraDef::Sum(parts) => write!(f, "sum [{}]", join(parts)),
        }
    }
}

impl fmt::Display for ImageKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ImageKey::Unit(u) => write!(f, "{u}"),
            ImageKey::Name(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Display for CheckSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "check {}", self.kind())?;
        match self {
            CheckSpec::ExpLaw { b, c1, c2 } => write!(f, " {b} {c1} {c2}"),
            CheckSpec::Coassoc { m } => write!(f, " {m}"),
            CheckSpec::Functor { f: a, f2, g, g2 } => write!(f, " {a} {f2} {g} {g2}"),
            CheckSpec::Surjective { f: a, c } => write!(f, " {a} {c}"),
            CheckSpec::SliceLemma { count, max_dim } => {
                write!(f, " {count}")?;
                match max_dim {
                    Some(d) => write!(f, " dim {d}"),
                    None => Ok(()),
                }
            }
            CheckSpec::DirSum { bs, cs } => write!(f, " [{}] [{}]", join(bs), join(cs)),
            CheckSpec::TensorSplit { b1, b2, c } => write!(f, " {b1} {b2} {c}"),
            CheckSpec::Recovery { b } => write!(f, " {b}"),
            CheckSpec::Classical { m, n } => write!(f, " {m} {n}"),
            CheckSpec::WellDefined { h } => write!(f, " {h}"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Algebra { name, def } => write!(f, "algebra {name} = {def}"),
            Statement::Hom { name, source, target, def } => {
                write!(f, "hom {name} : {source} -> {target} = ")?;
                match def {
                    HomDef::Identity => f.write_str("identity"),
                    HomDef::Images(imgs) => {
                        let parts: Vec<String> = imgs.iter().map(|(k, v)| format!("{k} -> {v}")).collect();
                        write!(f, "images {{ {} }}", parts.join(", "))
                    }
                }
            }
            Statement::Mor { name, source, target } => write!(f, "mor {name} = build {source} {target}"),
            Statement::Check(c) => write!(f, "{c}"),
            Statement::Abelianize(n) => write!(f, "abelianize {n}"),
            Statement::Characters(n) => write!(f, "characters {n}"),
            Statement::RepSearch { name, args } => {
                write!(f, "repsearch {name} dim {}", args.dim)?;
                if let Some(r) = args.restarts {
                    write!(f, " restarts {r}")?;
                }
                if let Some(i) = args.iterations {
                    write!(f, " iterations {i}")?;
                }
                if args.noncommutative {
                    f.write_str(" noncommutative")?;
                }
                Ok(())
            }
            Statement::Show(n) => write!(f, "show {n}"),
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.statement)?;
        }
        Ok(())
    }
}
