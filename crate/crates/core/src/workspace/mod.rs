//! The workspace language: algebras, homomorphisms, Mor presentations and
//! checks, one statement per line or `;`.
//!
//! ```text
//! algebra C2 = blocks [1,1]
//! algebra A = present < p!, q! | p p = p, q q = q >
//! hom f : C3 -> C2 = images { e[0,0,0] -> e[0,0,0], e[1,0,0] -> e[1,0,0], e[2,0,0] -> 0 }
//! mor M = build C2 C2
//! check coassoc M
//! abelianize A; characters A
//! repsearch M dim 2 noncommutative
//! ```
//!
//! `C<n>` and `M<n>` name `ℂⁿ` and `Mₙ` unless rebound.

mod ast;
mod eval;
mod lexer;
mod parser;
mod report;
mod run;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

pub use ast::*;
pub use eval::{to_element, to_poly};
pub use lexer::{lex, Span, Tok, Token};
pub use parser::{parse_algebra_def, parse_expr, parse_program};
pub use report::{Entry, Field, Report, Status, Summary, VerdictLine, REPORT_FORMAT, REPORT_VERSION};
pub use run::{RunOptions, Value};

use crate::fd_algebra::FdAlgebra;
use crate::presentation::{Generator, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct Diagnostic {
    pub span: Span,
    pub message: String,
    pub expected: Vec<String>,
}

impl Diagnostic {
    pub fn new(span: Span, message: impl Into<String>) -> Self {
        Diagnostic { span, message: message.into(), expected: Vec::new() }
    }

    pub fn with_expected(mut self, expected: Vec<String>) -> Self {
        self.expected = expected;
        self
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.span.line, self.span.col, self.message)?;
        if !self.expected.is_empty() {
            write!(f, "; expected one of {}", self.expected.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// A multi-matrix algebra.
    Algebra,
    Presented,
    /// A *-homomorphism of multi-matrix algebras.
    FdHom,
    Hom,
    Mor,
}

impl Kind {
    pub fn describe(self) -> &'static str {
        match self {
            Kind::Algebra => "a multi-matrix algebra",
            Kind::Presented => "a presented algebra",
            Kind::FdHom => "a homomorphism of multi-matrix algebras",
            Kind::Hom => "a homomorphism of presented algebras",
            Kind::Mor => "a Mor presentation",
        }
    }

    fn is_algebra_like(self) -> bool {
        matches!(self, Kind::Algebra | Kind::Presented | Kind::Mor)
    }
}

/// `C<n>` is `ℂⁿ` and `M<n>` is `Mₙ` for `n ≥ 1`.
pub fn standard_algebra(name: &str) -> Option<FdAlgebra> {
    let (head, digits) = name.split_at(1.min(name.len()));
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.starts_with('0') {
        return None;
    }
    let n: usize = digits.parse().ok().filter(|&n| n <= 64)?;
    match head {
        "C" => FdAlgebra::commutative(n).ok(),
        "M" => FdAlgebra::full_matrix(n).ok(),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Binding {
    pub name: String,
    pub kind: Kind,
    /// Where the binding was defined; `None` for the standard algebras.
    pub defined_at: Option<Span>,
}

/// A parsed program whose names all resolve to bindings of the right kind.
#[derive(Debug, Clone, PartialEq)]
pub struct Workspace {
    pub program: Program,
    pub bindings: Vec<Binding>,
}

struct Scope {
    kinds: HashMap<String, (Kind, Option<Span>)>,
    order: Vec<String>,
}

impl Scope {
    fn lookup(&self, id: &Ident) -> Result<Kind, Diagnostic> {
        if let Some((k, _)) = self.kinds.get(&id.name) {
            return Ok(*k);
        }
        if standard_algebra(&id.name).is_some() {
            return Ok(Kind::Algebra);
        }
        Err(Diagnostic::new(id.span, format!("unknown name `{}`", id.name)))
    }

    fn expect(&self, id: &Ident, ok: impl Fn(Kind) -> bool, wanted: &str) -> Result<Kind, Diagnostic> {
        let k = self.lookup(id)?;
        if ok(k) {
            Ok(k)
        } else {
            Err(Diagnostic::new(id.span, format!("kind mismatch: `{}` is {}, expected {wanted}", id.name, k.describe())))
        }
    }

    fn algebra(&self, id: &Ident) -> Result<Kind, Diagnostic> {
        self.expect(id, |k| k == Kind::Algebra, "a multi-matrix algebra")
    }

    fn algebra_like(&self, id: &Ident) -> Result<Kind, Diagnostic> {
        self.expect(id, Kind::is_algebra_like, "an algebra or Mor presentation")
    }

    fn fd_hom(&self, id: &Ident) -> Result<Kind, Diagnostic> {
        self.expect(id, |k| k == Kind::FdHom, "a homomorphism of multi-matrix algebras")
    }

    fn define(&mut self, id: &Ident, kind: Kind) -> Result<(), Diagnostic> {
        if let Some((_, Some(at))) = self.kinds.get(&id.name) {
            return Err(Diagnostic::new(id.span, format!("`{}` is already bound at line {}", id.name, at.line)));
        }
        self.kinds.insert(id.name.clone(), (kind, Some(id.span)));
        self.order.push(id.name.clone());
        Ok(())
    }
}

fn resolve(program: &Program) -> Result<Vec<Binding>, Diagnostic> {
    let mut scope = Scope { kinds: HashMap::new(), order: Vec::new() };
    for located in &program.statements {
        match &located.statement {
            Statement::Algebra { name, def } => {
                let kind = match def {
                    AlgebraDef::Blocks(_) => Kind::Algebra,
                    AlgebraDef::Present { .. } => Kind::Presented,
                    AlgebraDef::Tensor(parts) | AlgebraDef::Sum(parts) => {
                        let mut all_fd = true;
                        for p in parts {
                            all_fd &= scope.algebra_like(p)? == Kind::Algebra;
                        }
                        if all_fd { Kind::Algebra } else { Kind::Presented }
                    }
                };
                scope.define(name, kind)?;
            }
            Statement::Hom { name, source, target, .. } => {
                let fd = scope.algebra_like(source)? == Kind::Algebra;
                let fd = scope.algebra_like(target)? == Kind::Algebra && fd;
                scope.define(name, if fd { Kind::FdHom } else { Kind::Hom })?;
            }
            Statement::Mor { name, source, target } => {
                scope.algebra_like(source)?;
                scope.algebra(target)?;
                scope.define(name, Kind::Mor)?;
            }
            Statement::Check(spec) => match spec {
                CheckSpec::ExpLaw { b, c1, c2 } => {
                    scope.algebra_like(b)?;
                    scope.algebra(c1)?;
                    scope.algebra(c2)?;
                }
                CheckSpec::Coassoc { m } => {
                    scope.expect(m, |k| matches!(k, Kind::Algebra | Kind::Mor), "a multi-matrix algebra or Mor presentation")?;
                }
                CheckSpec::Functor { f, f2, g, g2 } => {
                    for h in [f, f2, g, g2] {
                        scope.fd_hom(h)?;
                    }
                }
                CheckSpec::Surjective { f, c } => {
                    scope.fd_hom(f)?;
                    scope.algebra(c)?;
                }
                CheckSpec::SliceLemma { .. } | CheckSpec::Classical { .. } => {}
                CheckSpec::DirSum { bs, cs } => {
                    for a in bs.iter().chain(cs) {
                        scope.algebra(a)?;
                    }
                }
                CheckSpec::TensorSplit { b1, b2, c } => {
                    for a in [b1, b2, c] {
                        scope.algebra(a)?;
                    }
                }
                CheckSpec::Recovery { b } => {
                    scope.algebra(b)?;
                }
                CheckSpec::WellDefined { h } => {
                    scope.expect(h, |k| matches!(k, Kind::Hom | Kind::FdHom), "a homomorphism")?;
                }
            },
            Statement::Abelianize(n) => {
                scope.algebra_like(n)?;
                let at = scope.kinds.get(&n.name).and_then(|(_, s)| *s);
                if at.is_none() {
                    scope.order.push(n.name.clone());
                }
                scope.kinds.insert(n.name.clone(), (Kind::Presented, at.or(Some(n.span))));
            }
            Statement::Characters(n) | Statement::RepSearch { name: n, .. } => {
                scope.algebra_like(n)?;
            }
            Statement::Show(n) => {
                scope.lookup(n)?;
            }
        }
    }
    Ok(scope
        .order
        .iter()
        .map(|name| {
            let (kind, defined_at) = scope.kinds[name];
            Binding { name: name.clone(), kind, defined_at }
        })
        .collect())
}

/// Parses and resolves names; dangling references and kind mismatches are
/// rejected here with their positions.
pub fn parse_workspace(text: &str) -> Result<Workspace, Diagnostic> {
    let program = parse_program(text)?;
    let bindings = resolve(&program)?;
    Ok(Workspace { program, bindings })
}

impl Workspace {
    pub fn binding(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    /// Builds every binding in order and runs the report-producing statements.
    pub fn run(&self, opts: &RunOptions) -> Result<Report, Diagnostic> {
        run::run(&self.program, opts)
    }
}

/// Builds a presentation from `present < … >` syntax.
pub fn build_presentation(generators: &[GeneratorDecl], relations: &[RelationSyntax], span: Span) -> Result<Presentation, Diagnostic> {
    let gens: Vec<Generator> = generators
        .iter()
        .map(|g| if g.self_adjoint { Generator::self_adjoint(&g.name.name) } else { Generator::plain(&g.name.name) })
        .collect();
    let scratch = Presentation::new(gens.clone(), Vec::new()).map_err(|e| Diagnostic::new(span, e.to_string()))?;
    let mut rels = Vec::new();
    for r in relations {
        let mut p = to_poly(&r.lhs, &scratch, span)?;
        if let Some(rhs) = &r.rhs {
            p = p.sub(&to_poly(rhs, &scratch, span)?);
        }
        rels.push(p);
    }
    Presentation::new(gens, rels).map_err(|e| Diagnostic::new(span, e.to_string()))
}

impl FromStr for Presentation {
    type Err = Diagnostic;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match parse_algebra_def(s)? {
            AlgebraDef::Present { generators, relations } => {
                build_presentation(&generators, &relations, Span { line: 1, col: 1 })
            }
            _ => Err(Diagnostic::new(Span { line: 1, col: 1 }, "expected `present < … >`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentation_text_round_trip() {
        let p: Presentation = "present < p!, q! | p p = p, q q = q, p q p = 1/2 p >".parse().unwrap();
        let again: Presentation = p.to_string().parse().unwrap();
        assert_eq!(p, again);
        assert_eq!(p.to_string(), again.to_string());
        let u: Presentation = "present < u | u^* u = 1, u u^* = 1 >".parse().unwrap();
        assert_eq!(u.to_string().parse::<Presentation>().unwrap(), u);
    }

    #[test]
    fn standard_names() {
        assert_eq!(standard_algebra("C3"), FdAlgebra::commutative(3).ok());
        assert_eq!(standard_algebra("M2"), FdAlgebra::full_matrix(2).ok());
        assert_eq!(standard_algebra("C0"), None);
        assert_eq!(standard_algebra("Cx"), None);
        assert_eq!(standard_algebra("C"), None);
    }

    #[test]
    fn resolution_errors() {
        let e = parse_workspace("mor M = build C2 Q").unwrap_err();
        assert_eq!((e.span, e.message.as_str()), (Span { line: 1, col: 18 }, "unknown name `Q`"));
        let e = parse_workspace("algebra A = blocks [1]\nalgebra A = blocks [2]").unwrap_err();
        assert!(e.message.contains("already bound at line 1"));
        let e = parse_workspace("algebra A = blocks [1,1]\ncheck functor A A A A").unwrap_err();
        assert!(e.message.starts_with("kind mismatch"));
        assert_eq!(e.span.line, 2);
        let e = parse_workspace("algebra P = present < p! | p p = p >\nmor M = build C2 P").unwrap_err();
        assert!(e.message.contains("expected a multi-matrix algebra"));
    }

    #[test]
    fn kinds_follow_definitions() {
        let w = parse_workspace(
            "algebra T = tensor [C2, M2]\nhom f : C2 -> C2 = identity\nmor M = build C2 C2\nabelianize M",
        )
        .unwrap();
        assert_eq!(w.binding("T").unwrap().kind, Kind::Algebra);
        assert_eq!(w.binding("f").unwrap().kind, Kind::FdHom);
        assert_eq!(w.binding("M").unwrap().kind, Kind::Presented);
    }

    #[test]
    fn program_round_trip() {
        let text = "algebra A = present < p!, q | p p = p, q^* q = 1 >\n\
                    algebra B = blocks [1,2]\n\
                    algebra S = sum [A, B]\n\
                    hom f : C3 -> C2 = images { e[0,0,0] -> e[0,0,0], e[1,0,0] -> e[1,0,0] + 0, e[2,0,0] -> 0 }\n\
                    hom g : C2 -> C2 = identity\n\
                    mor M = build C2 C2\n\
                    check explaw C2 C2 C2\n\
                    check slice-lemma 5 dim 3\n\
                    check dirsum [C2, C2] [C2, C2]\n\
                    check classical 2 3\n\
                    repsearch M dim 2 restarts 4 noncommutative\n\
                    abelianize A\n\
                    characters A\n\
                    show M\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.to_string(), text);
        assert_eq!(parse_program(&p.to_string()).unwrap(), p);
    }
}
