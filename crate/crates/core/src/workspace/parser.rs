use std::collections::BTreeSet;

use num_traits::ToPrimitive;

use super::ast::*;
use super::lexer::{lex, Span, Tok, Token};
use super::Diagnostic;
use crate::fd_algebra::MatrixUnit;

const STATEMENT_KEYWORDS: [&str; 8] =
    ["algebra", "hom", "mor", "check", "abelianize", "characters", "repsearch", "show"];

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    expected: BTreeSet<String>,
}

type PResult<T> = Result<T, Diagnostic>;

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)].tok
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        self.expected.clear();
        t
    }

    fn error(&self) -> Diagnostic {
        let t = self.peek();
        Diagnostic::new(t.span, format!("unexpected {}", t.tok.describe()))
            .with_expected(self.expected.iter().cloned().collect())
    }

    fn check(&mut self, tok: &Tok) -> bool {
        self.expected.insert(Tok::describe(tok));
        &self.peek().tok == tok
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.check(tok) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &Tok) -> PResult<Span> {
        if self.check(tok) { Ok(self.bump().span) } else { Err(self.error()) }
    }

    fn check_keyword(&mut self, kw: &str) -> bool {
        self.expected.insert(format!("`{kw}`"));
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.check_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, kw: &str) -> PResult<Span> {
        if self.check_keyword(kw) { Ok(self.bump().span) } else { Err(self.error()) }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        self.expected.insert(what.to_string());
        match &self.peek().tok {
            Tok::Ident(s) => {
                let name = s.clone();
                Ok(Ident { name, span: self.bump().span })
            }
            _ => Err(self.error()),
        }
    }

    fn integer(&mut self, what: &str) -> PResult<usize> {
        self.expected.insert(what.to_string());
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number { value, imaginary: false } if value.is_integer() => {
                let n = value.to_integer().to_usize().ok_or_else(|| Diagnostic::new(t.span, "integer out of range"))?;
                self.bump();
                Ok(n)
            }
            _ => Err(self.error()),
        }
    }

    fn end_of_statement(&mut self) -> PResult<()> {
        if self.check(&Tok::Newline) || self.check(&Tok::Semi) || self.check(&Tok::Eof) {
            if self.peek().tok != Tok::Eof {
                self.bump();
            }
            Ok(())
        } else {
            Err(self.error())
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut statements = Vec::new();
        loop {
            while matches!(self.peek().tok, Tok::Newline | Tok::Semi) {
                self.bump();
            }
            if self.peek().tok == Tok::Eof {
                break;
            }
            let span = self.peek().span;
            let statement = self.statement()?;
            self.end_of_statement()?;
            statements.push(Located { statement, span });
        }
        Ok(Program { statements })
    }

    fn statement(&mut self) -> PResult<Statement> {
        for kw in STATEMENT_KEYWORDS {
            self.expected.insert(format!("`{kw}`"));
        }
        let kw = match &self.peek().tok {
            Tok::Ident(s) if STATEMENT_KEYWORDS.contains(&s.as_str()) => s.clone(),
            _ => return Err(self.error()),
        };
        self.bump();
        match kw.as_str() {
            "algebra" => {
                let name = self.ident("algebra name")?;
                self.expect(&Tok::Eq)?;
                Ok(Statement::Algebra { name, def: self.algebra_def()? })
            }
            "hom" => {
                let name = self.ident("hom name")?;
                self.expect(&Tok::Colon)?;
                let source = self.ident("source algebra")?;
                self.expect(&Tok::Arrow)?;
                let target = self.ident("target algebra")?;
                self.expect(&Tok::Eq)?;
                let def = if self.eat_keyword("identity") {
                    HomDef::Identity
                } else {
                    self.keyword("images")?;
                    HomDef::Images(self.images()?)
                };
                Ok(Statement::Hom { name, source, target, def })
            }
            "mor" => {
                let name = self.ident("Mor name")?;
                self.expect(&Tok::Eq)?;
                self.keyword("build")?;
                let source = self.ident("source algebra")?;
                let target = self.ident("target algebra")?;
                Ok(Statement::Mor { name, source, target })
            }
            "check" => Ok(Statement::Check(self.check_spec()?)),
            "abelianize" => Ok(Statement::Abelianize(self.ident("name")?)),
            "characters" => Ok(Statement::Characters(self.ident("name")?)),
            "show" => Ok(Statement::Show(self.ident("name")?)),
            "repsearch" => {
                let name = self.ident("name")?;
                self.keyword("dim")?;
                let mut args = RepSearchArgs { dim: self.integer("dimension")?, ..Default::default() };
                loop {
                    if self.eat_keyword("restarts") {
                        args.restarts = Some(self.integer("restart count")?);
                    } else if self.eat_keyword("iterations") {
                        args.iterations = Some(self.integer("iteration count")?);
                    } else if self.eat_keyword("noncommutative") {
                        args.noncommutative = true;
                    } else {
                        break;
                    }
                }
                Ok(Statement::RepSearch { name, args })
            }
            _ => unreachable!("keyword list"),
        }
    }

    fn algebra_def(&mut self) -> PResult<AlgebraDef> {
        if self.eat_keyword("blocks") {
            self.expect(&Tok::LBracket)?;
            let mut blocks = vec![self.integer("block size")?];
            while self.eat(&Tok::Comma) {
                blocks.push(self.integer("block size")?);
            }
            self.expect(&Tok::RBracket)?;
            return Ok(AlgebraDef::Blocks(blocks));
        }
        if self.eat_keyword("present") {
            self.expect(&Tok::LAngle)?;
            let (generators, relations) = self.presentation_body()?;
            self.expect(&Tok::RAngle)?;
            return Ok(AlgebraDef::Present { generators, relations });
        }
        if self.eat_keyword("tensor") {
            return Ok(AlgebraDef::Tensor(self.name_list()?));
        }
        self.keyword("sum")?;
        Ok(AlgebraDef::Sum(self.name_list()?))
    }

    fn presentation_body(&mut self) -> PResult<(Vec<GeneratorDecl>, Vec<RelationSyntax>)> {
        let mut generators = Vec::new();
        loop {
            let name = self.ident("generator name")?;
            let self_adjoint = self.eat(&Tok::Bang);
            generators.push(GeneratorDecl { name, self_adjoint });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        let mut relations = Vec::new();
        if self.eat(&Tok::Pipe) {
            loop {
                let lhs = self.expr()?;
                let rhs = if self.eat(&Tok::Eq) { Some(self.expr()?) } else { None };
                relations.push(RelationSyntax { lhs, rhs });
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        Ok((generators, relations))
    }

    fn name_list(&mut self) -> PResult<Vec<Ident>> {
        self.expect(&Tok::LBracket)?;
        let mut names = vec![self.ident("name")?];
        while self.eat(&Tok::Comma) {
            names.push(self.ident("name")?);
        }
        self.expect(&Tok::RBracket)?;
        Ok(names)
    }

    fn images(&mut self) -> PResult<Vec<(ImageKey, Expr)>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        if self.eat(&Tok::RBrace) {
            return Ok(out);
        }
        loop {
            let key = if self.at_unit() {
                ImageKey::Unit(self.unit()?)
            } else {
                ImageKey::Name(self.ident("generator or matrix unit")?)
            };
            self.expect(&Tok::Arrow)?;
            out.push((key, self.expr()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::RBrace)?;
        Ok(out)
    }

    fn check_spec(&mut self) -> PResult<CheckSpec> {
        for k in CheckSpec::KINDS {
            self.expected.insert(format!("`{k}`"));
        }
        let span = self.peek().span;
        let mut kind = match &self.peek().tok {
            Tok::Ident(s) => s.clone(),
            _ => return Err(self.error()),
        };
        if kind == "slice" && self.peek_at(1) == &Tok::Minus && self.peek_at(2) == &Tok::Ident("lemma".into()) {
            self.bump();
            self.bump();
            kind = "slice-lemma".into();
        }
        if !CheckSpec::KINDS.contains(&kind.as_str()) {
            return Err(self.error());
        }
        self.bump();
        let spec = match kind.as_str() {
            "explaw" => CheckSpec::ExpLaw { b: self.ident("B")?, c1: self.ident("C1")?, c2: self.ident("C2")? },
            "coassoc" => CheckSpec::Coassoc { m: self.ident("Mor or algebra name")? },
            "functor" => CheckSpec::Functor {
                f: self.ident("hom f")?,
                f2: self.ident("hom f2")?,
                g: self.ident("hom g")?,
                g2: self.ident("hom g2")?,
            },
            "surjective" => CheckSpec::Surjective { f: self.ident("hom")?, c: self.ident("target algebra")? },
            "slice-lemma" => {
                let count = self.integer("square count")?;
                let max_dim = if self.eat_keyword("dim") { Some(self.integer("maximal dimension")?) } else { None };
                CheckSpec::SliceLemma { count, max_dim }
            }
            "dirsum" => {
                let bs = self.name_list()?;
                let cs = self.name_list()?;
                if bs.len() != cs.len() {
                    return Err(Diagnostic::new(
                        span,
                        format!("arity mismatch: {} source summands but {} target summands", bs.len(), cs.len()),
                    ));
                }
                CheckSpec::DirSum { bs, cs }
            }
            "tensorsplit" => {
                CheckSpec::TensorSplit { b1: self.ident("B1")?, b2: self.ident("B2")?, c: self.ident("C")? }
            }
            "recovery" => CheckSpec::Recovery { b: self.ident("algebra")? },
            "classical" => CheckSpec::Classical { m: self.integer("m")?, n: self.integer("n")? },
            _ => CheckSpec::WellDefined { h: self.ident("hom")? },
        };
        if self.peek_is_extra_argument() {
            let t = self.peek();
            return Err(Diagnostic::new(t.span, format!("arity mismatch: too many arguments to `check {kind}`")));
        }
        Ok(spec)
    }

    fn peek_is_extra_argument(&self) -> bool {
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Number { .. } | Tok::LBracket)
    }

    fn at_unit(&self) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == "e") && self.peek_at(1) == &Tok::LBracket
    }

    fn unit(&mut self) -> PResult<MatrixUnit> {
        self.bump();
        self.expect(&Tok::LBracket)?;
        let k = self.integer("block index")?;
        self.expect(&Tok::Comma)?;
        let i = self.integer("row index")?;
        self.expect(&Tok::Comma)?;
        let j = self.integer("column index")?;
        self.expect(&Tok::RBracket)?;
        Ok(MatrixUnit::new(k, i, j))
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&Tok::Plus) {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(&Tok::Minus) {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.term()?)));
        }
        let mut lhs = self.postfix()?;
        loop {
            if self.eat(&Tok::Times) || self.starts_atom() {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.postfix()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.expected.insert("polynomial".into());
        matches!(self.peek().tok, Tok::Ident(_) | Tok::Number { .. } | Tok::LParen)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.atom()?;
        while self.eat(&Tok::Caret) {
            if self.eat(&Tok::Times) {
                e = Expr::Star(Box::new(e));
            } else {
                let n = self.integer("`*` or exponent")?;
                e = Expr::Pow(Box::new(e), u32::try_from(n).map_err(|_| self.error())?);
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<Expr> {
        self.expected.insert("polynomial".into());
        let t = self.peek().clone();
        match &t.tok {
            Tok::Number { .. } => {
                self.bump();
                Ok(Expr::Num(t.number_value().expect("number")))
            }
            Tok::Ident(_) if self.at_unit() => Ok(Expr::Unit(self.unit()?)),
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::Name(Ident { name: name.clone(), span: t.span }))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.error()),
        }
    }
}

fn parser(text: &str) -> PResult<Parser> {
    Ok(Parser { tokens: lex(text)?, pos: 0, expected: BTreeSet::new() })
}

/// Syntax only: no name resolution.
pub fn parse_program(text: &str) -> Result<Program, Diagnostic> {
    parser(text)?.program()
}

/// A single polynomial.
pub fn parse_expr(text: &str) -> Result<Expr, Diagnostic> {
    let mut p = parser(text)?;
    let e = p.expr()?;
    p.expect(&Tok::Eof)?;
    Ok(e)
}

/// `present < … >` or `blocks […]` on its own.
pub fn parse_algebra_def(text: &str) -> Result<AlgebraDef, Diagnostic> {
    let mut p = parser(text)?;
    let d = p.algebra_def()?;
    p.expect(&Tok::Eof)?;
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn statements_and_separators() {
        let p = parse_program("algebra C2 = blocks [1,1]; mor M = build C2 C2\n\ncheck coassoc M").unwrap();
        assert_eq!(p.statements.len(), 3);
        assert_eq!(p.statements[2].span, Span { line: 3, col: 1 });
        assert!(matches!(p.statements[2].statement, Statement::Check(CheckSpec::Coassoc { .. })));
    }

    #[test]
    fn slice_lemma_kind() {
        let p = parse_program("check slice-lemma 10 dim 4").unwrap();
        assert_eq!(
            p.statements[0].statement,
            Statement::Check(CheckSpec::SliceLemma { count: 10, max_dim: Some(4) })
        );
    }

    #[test]
    fn diagnostics_carry_position_and_expected_tokens() {
        let e = parse_program("algebra A = blocks [1,\n  x]").unwrap_err();
        assert_eq!(e.span, Span { line: 2, col: 3 });
        assert!(e.expected.contains(&"block size".to_string()));
        let e = parse_program("frobnicate A").unwrap_err();
        assert!(e.expected.contains(&"`algebra`".to_string()));
        let e = parse_program("check coassoc M N").unwrap_err();
        assert!(e.message.contains("arity"));
        let e = parse_program("check dirsum [A, B] [C]").unwrap_err();
        assert!(e.message.contains("arity"));
    }

    #[test]
    fn presentation_syntax() {
        let d = parse_algebra_def("present < p!, q | p p = p, q^* q - 1 >").unwrap();
        let AlgebraDef::Present { generators, relations } = d else { panic!() };
        assert!(generators[0].self_adjoint && !generators[1].self_adjoint);
        assert_eq!(relations.len(), 2);
        assert!(relations[1].rhs.is_none());
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("-a b + c^* d").unwrap().to_string(), "-a b + c^* d");
        assert_eq!(parse_expr("a (b + c)").unwrap().to_string(), "a (b + c)");
        assert_eq!(parse_expr("(a b)^*").unwrap().to_string(), "(a b)^*");
        assert_eq!(parse_expr("a - (b - c)").unwrap().to_string(), "a - (b - c)");
        assert_eq!(parse_expr("a*b").unwrap().to_string(), "a b");
        assert_eq!(parse_expr("1/2 + 3/4i").unwrap().to_string(), "1/2 + 3/4i");
        assert_eq!(parse_expr("e[0,1,0] x^2").unwrap().to_string(), "e[0,1,0] x^2");
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![
            (0i64..5, 1i64..4, any::<bool>()).prop_map(|(n, d, im)| {
                let q = crate::scalar::GaussRat::ratio(n, d);
                Expr::Num(if im { &q * &crate::scalar::GaussRat::i() } else { q })
            }),
            prop_oneof![Just("p"), Just("q"), Just("x_1"), Just("i")].prop_map(|n| Expr::Name(Ident::new(n))),
            (0usize..2, 0usize..2, 0usize..2).prop_map(|(k, i, j)| Expr::Unit(MatrixUnit::new(k, i, j))),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Expr::Neg(Box::new(a))),
                inner.clone().prop_map(|a| Expr::Star(Box::new(a))),
                (inner.clone(), 2u32..4).prop_map(|(a, n)| Expr::Pow(Box::new(a), n)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Add(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| Expr::Mul(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn expr_round_trip(e in arb_expr()) {
            let printed = e.to_string();
            let parsed = parse_expr(&printed).unwrap();
            prop_assert_eq!(&parsed, &e);
            prop_assert_eq!(parsed.to_string(), printed);
        }
    }
}
