//! Name resolution and construction of the algebraic objects a script
//! declares. Every failure here carries a source position.

use std::collections::BTreeMap;
use std::sync::Arc;

use adic_core::adic::{AdicTower, TowerMorphism};
use adic_core::free::{FreeElement, Matrix};
use adic_core::module::FPModule;
use adic_core::monomial::MonomialOrder;
use adic_core::poly::{PolyRing, Polynomial};
use adic_core::ring::{Ideal, QuotientRing, Ring};
use adic_core::scalar::Field;

use crate::dsl::ast::*;
use crate::dsl::{ErrorKind, ParseError};

#[derive(Clone, Debug)]
pub enum Object {
    Ideal(Ideal),
    Module(FPModule),
    Tower(AdicTower),
    Morphism(Box<TowerMorphism>),
}

impl Object {
    fn kind(&self) -> &'static str {
        match self {
            Object::Ideal(_) => "ideal",
            Object::Module(_) => "module",
            Object::Tower(_) => "tower",
            Object::Morphism(_) => "morphism",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Arg {
    Ideal,
    Module,
    Tower,
    Morphism,
    IdealOrModule,
}

impl Arg {
    fn accepts(self, o: &Object) -> bool {
        matches!(
            (self, o),
            (Arg::Ideal, Object::Ideal(_))
                | (Arg::Module, Object::Module(_))
                | (Arg::Tower, Object::Tower(_))
                | (Arg::Morphism, Object::Morphism(_))
                | (Arg::IdealOrModule, Object::Ideal(_) | Object::Module(_))
        )
    }

    fn describe(self) -> &'static str {
        match self {
            Arg::Ideal => "an ideal",
            Arg::Module => "a module",
            Arg::Tower => "a tower",
            Arg::Morphism => "a morphism",
            Arg::IdealOrModule => "an ideal or a module",
        }
    }
}

struct CommandSpec {
    name: &'static str,
    args: &'static [Arg],
    options: &'static [&'static str],
    /// Needs an ideal, given by `wrt` or the latest declared one.
    uses_ideal: bool,
}

const COMMANDS: &[CommandSpec] = &[
    CommandSpec { name: "gb", args: &[Arg::IdealOrModule], options: &[], uses_ideal: false },
    CommandSpec { name: "tor", args: &[Arg::Module, Arg::Module], options: &["index", "depth"], uses_ideal: false },
    CommandSpec { name: "koszul", args: &[Arg::Ideal], options: &["kmax"], uses_ideal: false },
    CommandSpec { name: "wpr", args: &[Arg::Ideal], options: &["kmax", "depth"], uses_ideal: false },
    CommandSpec { name: "flatcheck", args: &[Arg::Module], options: &["wrt", "kmax", "depth", "tests"], uses_ideal: true },
    CommandSpec { name: "tower-validate", args: &[Arg::Tower], options: &[], uses_ideal: false },
    CommandSpec { name: "system-resolution", args: &[Arg::Tower], options: &["length", "depth"], uses_ideal: false },
    CommandSpec { name: "lift", args: &[Arg::Tower], options: &["level", "length", "depth"], uses_ideal: false },
    CommandSpec { name: "prop250", args: &[Arg::Module], options: &["wrt", "kmax", "depth"], uses_ideal: true },
    CommandSpec { name: "lemma290", args: &[Arg::Tower], options: &["length", "depth"], uses_ideal: false },
    CommandSpec { name: "limit-flat", args: &[Arg::Tower], options: &["tests", "length", "depth"], uses_ideal: false },
    CommandSpec { name: "torsion", args: &[Arg::Module], options: &["wrt"], uses_ideal: true },
    CommandSpec { name: "thm230", args: &[Arg::Module], options: &["wrt", "kmax"], uses_ideal: true },
    CommandSpec { name: "ml", args: &[Arg::Morphism], options: &[], uses_ideal: false },
];

pub fn command_names() -> impl Iterator<Item = &'static str> {
    COMMANDS.iter().map(|c| c.name)
}

/// A command whose names have been resolved against the declarations
/// preceding it.
#[derive(Clone, Debug)]
pub struct ResolvedCommand {
    pub command: Command,
    pub ring: Ring,
    pub args: Vec<(String, Object)>,
    pub ideal: Option<(String, Ideal)>,
    pub tests: Option<Vec<(String, FPModule)>>,
    /// Canonical text of the declarations this command depends on.
    pub inputs: Vec<String>,
}

impl ResolvedCommand {
    pub fn int_option(&self, key: &str) -> Option<u64> {
        match self.command.option(key) {
            Some(OptValue::Int(n)) => Some(*n),
            _ => None,
        }
    }

    pub fn module(&self, i: usize) -> &FPModule {
        match &self.args[i].1 {
            Object::Module(m) => m,
            _ => unreachable!("checked at resolution"),
        }
    }

    pub fn tower(&self, i: usize) -> &AdicTower {
        match &self.args[i].1 {
            Object::Tower(t) => t,
            _ => unreachable!("checked at resolution"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Session {
    pub ring: Option<(String, Ring)>,
    pub commands: Vec<ResolvedCommand>,
}

struct Builder {
    ring: Option<(String, Ring)>,
    objects: BTreeMap<String, (Object, String)>,
    last_ideal: Option<String>,
    ring_text: String,
}

fn mismatch(span: Span, msg: impl Into<String>) -> ParseError {
    ParseError::new(ErrorKind::Mismatch, span, msg)
}

impl Builder {
    fn ring(&self, span: Span) -> Result<&Ring, ParseError> {
        self.ring
            .as_ref()
            .map(|(_, r)| r)
            .ok_or_else(|| ParseError::new(ErrorKind::Undeclared, span, "no ring declared before this statement"))
    }

    fn lookup(&self, n: &Name) -> Result<&(Object, String), ParseError> {
        self.objects
            .get(&n.text)
            .ok_or_else(|| ParseError::new(ErrorKind::Undeclared, n.span, format!("`{}` is not declared", n.text)))
    }

    fn declare(&mut self, n: &Name, o: Object, text: String) -> Result<(), ParseError> {
        if self.objects.contains_key(&n.text) || self.ring.as_ref().is_some_and(|(r, _)| *r == n.text) {
            return Err(mismatch(n.span, format!("`{}` is already declared", n.text)));
        }
        self.objects.insert(n.text.clone(), (o, text));
        Ok(())
    }

    fn ideal_named(&self, n: &Name) -> Result<(Ideal, String), ParseError> {
        match self.lookup(n)? {
            (Object::Ideal(i), t) => Ok((i.clone(), t.clone())),
            (o, _) => Err(mismatch(n.span, format!("`{}` is a {}, expected an ideal", n.text, o.kind()))),
        }
    }

    fn module_named(&self, n: &Name) -> Result<(FPModule, String), ParseError> {
        match self.lookup(n)? {
            (Object::Module(m), t) => Ok((m.clone(), t.clone())),
            (o, _) => Err(mismatch(n.span, format!("`{}` is a {}, expected a module", n.text, o.kind()))),
        }
    }

    fn default_ideal(&self, wrt: Option<&Name>, span: Span) -> Result<(String, Ideal, String), ParseError> {
        match wrt {
            Some(n) => {
                let (i, t) = self.ideal_named(n)?;
                Ok((n.text.clone(), i, t))
            }
            None => {
                let name = self.last_ideal.clone().ok_or_else(|| {
                    ParseError::new(ErrorKind::Undeclared, span, "no ideal declared before this statement")
                })?;
                let Some((Object::Ideal(i), t)) = self.objects.get(&name) else {
                    unreachable!("last_ideal names an ideal")
                };
                Ok((name, i.clone(), t.clone()))
            }
        }
    }

    fn poly(&self, base: &Arc<PolyRing>, e: &Expr) -> Result<Polynomial, ParseError> {
        Ok(match e {
            Expr::Int(s, span) => base.parse(s).map_err(|err| mismatch(*span, err.to_string()))?,
            Expr::Frac(p, q, span) => {
                let den = base.parse(q).map_err(|err| mismatch(*span, err.to_string()))?;
                let inv = den
                    .constant_term()
                    .inv()
                    .ok_or_else(|| mismatch(*span, format!("`{q}` is not invertible in the coefficient field")))?;
                base.parse(p).map_err(|err| mismatch(*span, err.to_string()))?.scale(&inv)
            }
            Expr::Var(n) => match base.var_index(&n.text) {
                Some(i) => base.var(i),
                None => {
                    let ring = self.ring.as_ref().map(|(r, _)| r.as_str()).unwrap_or("?");
                    return Err(mismatch(n.span, format!("`{}` is not a variable of ring {ring}", n.text)));
                }
            },
            Expr::Add(a, b) => self.poly(base, a)?.add(&self.poly(base, b)?),
            Expr::Sub(a, b) => self.poly(base, a)?.sub(&self.poly(base, b)?),
            Expr::Mul(a, b) => self.poly(base, a)?.mul(&self.poly(base, b)?),
            Expr::Neg(a, _) => self.poly(base, a)?.neg(),
            Expr::Pow(a, k, _) => self.poly(base, a)?.pow(*k),
        })
    }

    fn columns(&self, base: &Arc<PolyRing>, rows: usize, cols: &[Vec<Expr>]) -> Result<Vec<FreeElement>, ParseError> {
        cols.iter()
            .map(|c| {
                if c.len() != rows {
                    return Err(mismatch(
                        c[0].span(),
                        format!("column has {} entries, expected {rows}", c.len()),
                    ));
                }
                let comps = c.iter().map(|e| self.poly(base, e)).collect::<Result<Vec<_>, _>>()?;
                Ok(FreeElement::new(base, comps).expect("entries share the ring"))
            })
            .collect()
    }

    fn stmt(&mut self, stmt: &Stmt) -> Result<Option<ResolvedCommand>, ParseError> {
        let text = stmt.to_string();
        match stmt {
            Stmt::Ring(r) => {
                if let Some((prev, _)) = &self.ring {
                    return Err(mismatch(r.name.span, format!("ring {prev} is already declared; one ring per script")));
                }
                let field = match r.field {
                    FieldSpec::Rational => Field::Rational,
                    FieldSpec::Prime(p) => Field::prime(p).map_err(|e| mismatch(r.name.span, e.to_string()))?,
                };
                let order = match r.order.as_ref().map(|o| (o.text.as_str(), o.span)) {
                    None | Some(("grevlex", _)) => MonomialOrder::Grevlex,
                    Some(("lex", _)) => MonomialOrder::Lex,
                    Some((other, span)) => {
                        return Err(ParseError::new(ErrorKind::Syntax, span, format!("unknown order `{other}`"))
                            .expecting(&["grevlex", "lex"]))
                    }
                };
                let vars = r.vars.iter().map(|v| v.text.clone()).collect();
                let base = PolyRing::new(field, vars, order).map_err(|e| mismatch(r.name.span, e.to_string()))?;
                let ring = match &r.modulus {
                    None => QuotientRing::polynomial(&base),
                    Some(gens) => {
                        self.ring = Some((r.name.text.clone(), QuotientRing::polynomial(&base)));
                        let gens = gens.iter().map(|g| self.poly(&base, g)).collect::<Result<Vec<_>, _>>()?;
                        let i = Ideal::new(&base, gens).expect("same ring");
                        QuotientRing::quotient(&base, i).expect("same ring")
                    }
                };
                self.ring = Some((r.name.text.clone(), ring));
                self.ring_text = text;
                Ok(None)
            }
            Stmt::Ideal(d) => {
                let ring = self.ring(d.name.span)?.clone();
                let gens = d.gens.iter().map(|g| self.poly(ring.base(), g)).collect::<Result<Vec<_>, _>>()?;
                let i = Ideal::new(ring.base(), gens).expect("same ring");
                self.declare(&d.name, Object::Ideal(i), text)?;
                self.last_ideal = Some(d.name.text.clone());
                Ok(None)
            }
            Stmt::Module(d) => {
                let ring = self.ring(d.name.span)?.clone();
                let (m, deps) = match &d.body {
                    ModuleExpr::Coker { rows, columns } => {
                        let rels = self.columns(ring.base(), *rows, columns)?;
                        (FPModule::new(&ring, *rows, rels).map_err(|e| mismatch(d.name.span, e.to_string()))?, vec![])
                    }
                    ModuleExpr::Free(n) => (FPModule::free(&ring, *n), vec![]),
                    ModuleExpr::Sum(parts) => {
                        let mut deps = Vec::new();
                        let (mut m, t) = self.module_named(&parts[0])?;
                        deps.push(t);
                        for p in &parts[1..] {
                            let (n, t) = self.module_named(p)?;
                            deps.push(t);
                            m = m.direct_sum(&n).map_err(|e| mismatch(p.span, e.to_string()))?;
                        }
                        (m, deps)
                    }
                };
                let mut full = deps.join("\n");
                full.push_str(&text);
                self.declare(&d.name, Object::Module(m), full)?;
                Ok(None)
            }
            Stmt::Tower(d) => {
                let (_, a, at) = self.default_ideal(d.wrt.as_ref(), d.name.span)?;
                let ring = self.ring(d.name.span)?.clone();
                let mut deps = vec![at];
                let tower = match &d.body {
                    TowerExpr::Induced { module, levels } => {
                        let (m, t) = self.module_named(module)?;
                        deps.push(t);
                        AdicTower::induced(&m, &a, *levels)
                    }
                    TowerExpr::Levels(names) => {
                        let mut ms = Vec::new();
                        for n in names {
                            let (m, t) = self.module_named(n)?;
                            deps.push(t);
                            ms.push(m);
                        }
                        AdicTower::from_presentations(&ring, &a, &ms)
                    }
                }
                .map_err(|e| mismatch(d.name.span, e.to_string()))?;
                deps.push(text);
                self.declare(&d.name, Object::Tower(tower), deps.join("\n"))?;
                Ok(None)
            }
            Stmt::Morphism(d) => {
                let ring = self.ring(d.name.span)?.clone();
                let get = |n: &Name| match self.lookup(n)? {
                    (Object::Tower(t), text) => Ok((t.clone(), text.clone())),
                    (o, _) => Err(mismatch(n.span, format!("`{}` is a {}, expected a tower", n.text, o.kind()))),
                };
                let (s, st) = get(&d.source)?;
                let (t, tt) = get(&d.target)?;
                if s.kmax() != t.kmax() {
                    return Err(mismatch(d.target.span, "source and target towers have different numbers of levels"));
                }
                let cols = self.columns(ring.base(), t.level(0).rank(), &d.columns)?;
                let m = Matrix::from_columns(ring.base(), t.level(0).rank(), cols)
                    .map_err(|e| mismatch(d.name.span, e.to_string()))?;
                if m.ncols() != s.level(0).rank() {
                    return Err(mismatch(
                        d.name.span,
                        format!("matrix has {} columns, source rank is {}", m.ncols(), s.level(0).rank()),
                    ));
                }
                let maps = vec![m; s.kmax() as usize + 1];
                let f = TowerMorphism::new(s, t, maps).map_err(|e| mismatch(d.name.span, e.to_string()))?;
                self.declare(&d.name, Object::Morphism(Box::new(f)), [st, tt, text].join("\n"))?;
                Ok(None)
            }
            Stmt::Command(c) => self.command(c, text).map(Some),
        }
    }

    fn command(&self, c: &Command, text: String) -> Result<ResolvedCommand, ParseError> {
        let spec = COMMANDS.iter().find(|s| s.name == c.name.text).ok_or_else(|| {
            let names: Vec<&str> = command_names().collect();
            ParseError::new(ErrorKind::Syntax, c.name.span, format!("unknown command `{}`", c.name.text)).expecting(&names)
        })?;
        if c.args.len() != spec.args.len() {
            return Err(mismatch(
                c.name.span,
                format!("`{}` takes {} argument(s), got {}", spec.name, spec.args.len(), c.args.len()),
            ));
        }
        let mut seen = Vec::new();
        for o in &c.options {
            if !spec.options.contains(&o.key.text.as_str()) {
                return Err(ParseError::new(
                    ErrorKind::Syntax,
                    o.key.span,
                    format!("`{}` does not take option `{}`", spec.name, o.key.text),
                )
                .expecting(spec.options));
            }
            if seen.contains(&o.key.text) {
                return Err(mismatch(o.key.span, format!("option `{}` given twice", o.key.text)));
            }
            seen.push(o.key.text.clone());
            let ok = match (o.key.text.as_str(), &o.value) {
                ("wrt", OptValue::Name(_)) | ("tests", OptValue::List(_)) => true,
                ("wrt" | "tests", _) => false,
                (_, v) => matches!(v, OptValue::Int(_)),
            };
            if !ok {
                return Err(mismatch(o.key.span, format!("option `{}` has a value of the wrong kind", o.key.text)));
            }
        }
        let ring = self.ring(c.name.span)?.clone();
        let mut inputs = vec![self.ring_text.clone()];
        let mut args = Vec::new();
        for (n, kind) in c.args.iter().zip(spec.args) {
            let (o, t) = self.lookup(n)?;
            if !kind.accepts(o) {
                return Err(mismatch(n.span, format!("`{}` is a {}, expected {}", n.text, o.kind(), kind.describe())));
            }
            inputs.push(t.clone());
            args.push((n.text.clone(), o.clone()));
        }
        let wrt = match c.option("wrt") {
            Some(OptValue::Name(n)) => Some(n),
            _ => None,
        };
        let ideal = if spec.uses_ideal {
            let (name, i, t) = self.default_ideal(wrt, c.name.span)?;
            inputs.push(t);
            Some((name, i))
        } else {
            None
        };
        let tests = match c.option("tests") {
            Some(OptValue::List(names)) => {
                let mut out = Vec::new();
                for n in names {
                    let (m, t) = self.module_named(n)?;
                    inputs.push(t);
                    out.push((n.text.clone(), m));
                }
                Some(out)
            }
            _ => None,
        };
        inputs.push(text);
        Ok(ResolvedCommand { command: c.clone(), ring, args, ideal, tests, inputs })
    }
}

/// Resolves every statement in order. Declarations are built eagerly so
/// that malformed objects are reported with their position.
pub fn resolve(script: &Script) -> Result<Session, ParseError> {
    let mut b = Builder {
        ring: None,
        objects: BTreeMap::new(),
        last_ideal: None,
        ring_text: String::new(),
    };
    let mut commands = Vec::new();
    for s in &script.stmts {
        if let Some(c) = b.stmt(s)? {
            commands.push(c);
        }
    }
    Ok(Session { ring: b.ring, commands })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn err(src: &str) -> ParseError {
        resolve(&parse(src).unwrap()).unwrap_err()
    }

    #[test]
    fn builds_objects() {
        let s = resolve(&parse("ring A = QQ[x,y]; module M = coker rows 1 [[x],[y]]; gb M;").unwrap()).unwrap();
        let m = s.commands[0].module(0);
        assert_eq!((m.rank(), m.relations().len()), (1, 2));
    }

    #[test]
    fn positioned_errors() {
        let e = err("ring A = QQ[x,y];\nideal a = <x, z>;");
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Mismatch, 2, 15));
        let e = err("ring A = QQ[x];\ngb b;");
        assert_eq!((e.kind, e.line, e.col), (ErrorKind::Undeclared, 2, 4));
        let e = err("ring A = QQ[x,y];\nmodule M = coker rows 2 [[x],[y]];");
        assert_eq!((e.kind, e.line), (ErrorKind::Mismatch, 2));
        let e = err("ring A = QQ[x];\nideal a = <x>;\ntor a a;");
        assert_eq!((e.kind, e.col), (ErrorKind::Mismatch, 5));
        let e = err("ring A = QQ[x];\nideal a = <x>;\nwpr a level 2;");
        assert_eq!(e.kind, ErrorKind::Syntax);
        assert_eq!(err("ring A = GF(9)[x];").kind, ErrorKind::Mismatch);
        assert_eq!(err("ideal a = <x>;").kind, ErrorKind::Undeclared);
    }
}
