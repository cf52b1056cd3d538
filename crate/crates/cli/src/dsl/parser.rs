use super::ast::*;
use super::error::{ErrorKind, ParseError};
use super::lexer::{lex, Tok, Token};

/// Keywords that introduce a `key value` option inside a command.
pub const OPTION_KEYS: &[&str] = &["wrt", "kmax", "depth", "level", "index", "length", "tests"];

const DECL_KEYWORDS: &[&str] = &["ring", "ideal", "module", "tower", "morphism"];

pub fn parse(src: &str) -> Result<Script, ParseError> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let mut stmts = Vec::new();
    while p.peek().tok != Tok::Eof {
        stmts.push(p.stmt()?);
    }
    Ok(Script { stmts })
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.tokens[(self.pos + k).min(self.tokens.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> ParseError {
        let t = self.peek();
        ParseError::new(ErrorKind::Syntax, t.span, format!("unexpected {}", t.tok.describe())).expecting(expected)
    }

    fn expect(&mut self, tok: Tok) -> Result<Token, ParseError> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.unexpected(&[tok.symbol()]))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(s) if s == kw)
    }

    fn keyword(&mut self, kw: &str) -> Result<Span, ParseError> {
        if self.is_keyword(kw) {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[kw]))
        }
    }

    fn name(&mut self) -> Result<Name, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) => {
                let n = Name { text: s.clone(), span: self.peek().span };
                self.bump();
                Ok(n)
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn int(&mut self) -> Result<(u64, Span), ParseError> {
        match &self.peek().tok {
            Tok::Int(s) => {
                let span = self.peek().span;
                let v = s
                    .parse::<u64>()
                    .map_err(|_| ParseError::new(ErrorKind::Syntax, span, format!("integer `{s}` is too large")))?;
                self.bump();
                Ok((v, span))
            }
            _ => Err(self.unexpected(&["integer"])),
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        let Tok::Ident(head) = &self.peek().tok else {
            return Err(self.unexpected(&["declaration", "command"]));
        };
        let head = head.clone();
        // a declaration keyword followed by `=` two tokens later; otherwise a command
        let is_decl = DECL_KEYWORDS.contains(&head.as_str())
            && matches!(self.peek_at(1).tok, Tok::Ident(_))
            && self.peek_at(2).tok == Tok::Eq;
        let stmt = if is_decl {
            self.bump();
            match head.as_str() {
                "ring" => Stmt::Ring(self.ring()?),
                "ideal" => Stmt::Ideal(self.ideal()?),
                "module" => Stmt::Module(self.module()?),
                "tower" => Stmt::Tower(self.tower()?),
                _ => Stmt::Morphism(self.morphism()?),
            }
        } else {
            Stmt::Command(self.command()?)
        };
        self.expect(Tok::Semi)?;
        Ok(stmt)
    }

    fn ring(&mut self) -> Result<RingDecl, ParseError> {
        let name = self.name()?;
        self.expect(Tok::Eq)?;
        let field = match &self.peek().tok {
            Tok::Ident(s) if s == "QQ" => {
                self.bump();
                FieldSpec::Rational
            }
            Tok::Ident(s) if s == "GF" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let (p, _) = self.int()?;
                self.expect(Tok::RParen)?;
                FieldSpec::Prime(p)
            }
            _ => return Err(self.unexpected(&["QQ", "GF"])),
        };
        self.expect(Tok::LBracket)?;
        let mut vars = Vec::new();
        if self.peek().tok != Tok::RBracket {
            vars.push(self.name()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                vars.push(self.name()?);
            }
        }
        self.expect(Tok::RBracket)?;
        let order = if self.is_keyword("order") {
            self.bump();
            Some(self.name()?)
        } else {
            None
        };
        let modulus = if self.peek().tok == Tok::Slash {
            self.bump();
            Some(self.poly_list()?)
        } else {
            None
        };
        Ok(RingDecl { name, field, vars, order, modulus })
    }

    fn poly_list(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LAngle)?;
        let mut gens = Vec::new();
        if self.peek().tok != Tok::RAngle {
            gens.push(self.expr()?);
            while self.peek().tok == Tok::Comma {
                self.bump();
                gens.push(self.expr()?);
            }
        }
        if self.peek().tok != Tok::RAngle {
            return Err(self.unexpected(&[",", ">"]));
        }
        self.bump();
        Ok(gens)
    }

    fn ideal(&mut self) -> Result<IdealDecl, ParseError> {
        let name = self.name()?;
        self.expect(Tok::Eq)?;
        Ok(IdealDecl { name, gens: self.poly_list()? })
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Expr>>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut cols = vec![self.column()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            cols.push(self.column()?);
        }
        if self.peek().tok != Tok::RBracket {
            return Err(self.unexpected(&[",", "]"]));
        }
        self.bump();
        Ok(cols)
    }

    fn column(&mut self) -> Result<Vec<Expr>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut entries = vec![self.expr()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            entries.push(self.expr()?);
        }
        if self.peek().tok != Tok::RBracket {
            return Err(self.unexpected(&[",", "]"]));
        }
        self.bump();
        Ok(entries)
    }

    fn module(&mut self) -> Result<ModuleDecl, ParseError> {
        let name = self.name()?;
        self.expect(Tok::Eq)?;
        let body = match &self.peek().tok {
            Tok::Ident(s) if s == "coker" => {
                self.bump();
                self.keyword("rows")?;
                let (rows, _) = self.int()?;
                ModuleExpr::Coker { rows: rows as usize, columns: self.matrix()? }
            }
            Tok::Ident(s) if s == "free" => {
                self.bump();
                ModuleExpr::Free(self.int()?.0 as usize)
            }
            Tok::Ident(s) if s == "sum" => {
                self.bump();
                let mut parts = vec![self.name()?];
                while matches!(self.peek().tok, Tok::Ident(_)) {
                    parts.push(self.name()?);
                }
                ModuleExpr::Sum(parts)
            }
            _ => return Err(self.unexpected(&["coker", "free", "sum"])),
        };
        Ok(ModuleDecl { name, body })
    }

    fn tower(&mut self) -> Result<TowerDecl, ParseError> {
        let name = self.name()?;
        self.expect(Tok::Eq)?;
        let body = match &self.peek().tok {
            Tok::Ident(s) if s == "induced" => {
                self.bump();
                let module = self.name()?;
                self.keyword("levels")?;
                let (levels, _) = self.int()?;
                TowerExpr::Induced { module, levels: levels as u32 }
            }
            Tok::Ident(s) if s == "levels" => {
                self.bump();
                TowerExpr::Levels(self.name_list()?)
            }
            _ => return Err(self.unexpected(&["induced", "levels"])),
        };
        let wrt = if self.is_keyword("wrt") {
            self.bump();
            Some(self.name()?)
        } else {
            None
        };
        Ok(TowerDecl { name, body, wrt })
    }

    fn name_list(&mut self) -> Result<Vec<Name>, ParseError> {
        self.expect(Tok::LBracket)?;
        let mut names = vec![self.name()?];
        while self.peek().tok == Tok::Comma {
            self.bump();
            names.push(self.name()?);
        }
        if self.peek().tok != Tok::RBracket {
            return Err(self.unexpected(&[",", "]"]));
        }
        self.bump();
        Ok(names)
    }

    fn morphism(&mut self) -> Result<MorphismDecl, ParseError> {
        let name = self.name()?;
        self.expect(Tok::Eq)?;
        let source = self.name()?;
        self.expect(Tok::Arrow)?;
        let target = self.name()?;
        self.keyword("by")?;
        Ok(MorphismDecl { name, source, target, columns: self.matrix()? })
    }

    /// Command names may contain hyphens, written without surrounding space.
    fn command_name(&mut self) -> Result<Name, ParseError> {
        let mut name = self.name()?;
        loop {
            let (dash, next) = (self.peek().clone(), self.peek_at(1).clone());
            let end = name.span.offset + name.text.len();
            match (&dash.tok, &next.tok) {
                (Tok::Minus, Tok::Ident(s)) if dash.span.offset == end && next.span.offset == end + 1 => {
                    name.text.push('-');
                    name.text.push_str(s);
                    self.bump();
                    self.bump();
                }
                _ => return Ok(name),
            }
        }
    }

    fn command(&mut self) -> Result<Command, ParseError> {
        let name = self.command_name()?;
        let mut args = Vec::new();
        let mut options = Vec::new();
        loop {
            match &self.peek().tok {
                Tok::Ident(s) if OPTION_KEYS.contains(&s.as_str()) => {
                    let key = self.name()?;
                    let value = match &self.peek().tok {
                        Tok::Int(_) => OptValue::Int(self.int()?.0),
                        Tok::Ident(_) => OptValue::Name(self.name()?),
                        Tok::LBracket => OptValue::List(self.name_list()?),
                        _ => return Err(self.unexpected(&["integer", "identifier", "["])),
                    };
                    options.push(CmdOption { key, value });
                }
                Tok::Ident(_) if options.is_empty() => args.push(self.name()?),
                Tok::Semi => return Ok(Command { name, args, options }),
                _ => {
                    let mut expected = OPTION_KEYS.to_vec();
                    expected.push(";");
                    return Err(self.unexpected(&expected));
                }
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().tok == Tok::Minus {
            let span = self.bump().span;
            return Ok(Expr::Neg(Box::new(self.unary()?), span));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().tok == Tok::Caret {
            let span = self.bump().span;
            let (e, espan) = self.int()?;
            let e = u32::try_from(e).map_err(|_| ParseError::new(ErrorKind::Syntax, espan, "exponent is too large"))?;
            return Ok(Expr::Pow(Box::new(base), e, span));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(n) => {
                self.bump();
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    match self.peek().tok.clone() {
                        Tok::Int(d) => {
                            self.bump();
                            Ok(Expr::Frac(n, d, t.span))
                        }
                        _ => Err(self.unexpected(&["integer"])),
                    }
                } else {
                    Ok(Expr::Int(n, t.span))
                }
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Var(Name { text: s, span: t.span }))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => Err(self.unexpected(&["integer", "identifier", "("])),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn declarations_and_errors() {
        let s = parse("ring A = QQ[x,y] order grevlex; ideal a = <x, y>;").unwrap();
        assert_eq!(s.stmts.len(), 2);
        let err = parse("ring A = QQ[x,y];\nideal a = <x,").unwrap_err();
        assert_eq!((err.kind, err.line, err.col), (ErrorKind::Syntax, 2, 14));
        assert!(err.expected.contains(&"identifier".to_string()));
    }

    #[test]
    fn hyphenated_commands_and_polynomials() {
        let s = parse("tower-validate T; ideal b = <x-y, x - y>;").unwrap();
        let Stmt::Command(c) = &s.stmts[0] else { panic!() };
        assert_eq!(c.name.text, "tower-validate");
        let Stmt::Ideal(i) = &s.stmts[1] else { panic!() };
        assert_eq!(i.gens[0], i.gens[1]);
        assert!(parse("tower -validate T;").is_err());
    }

    #[test]
    fn printing_reparses() {
        let src = "ideal a = <-(x + y)^2*3/4 - x*-y, (x^2)^3, x - (y - 1)>;";
        let s = parse(src).unwrap();
        assert_eq!(parse(&s.to_string()).unwrap(), s);
    }
}
