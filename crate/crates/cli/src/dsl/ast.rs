//! Syntax tree of session scripts. `Display` prints canonical source that
//! parses back to an equal tree.

use std::fmt;

/// Source position. Spans never participate in structural equality, so a
/// reparsed printout compares equal to the original tree.
#[derive(Clone, Copy, Debug, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
    pub offset: usize,
}

impl PartialEq for Span {
    fn eq(&self, _: &Span) -> bool {
        true
    }
}

impl Eq for Span {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Name {
    pub text: String,
    pub span: Span,
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(String, Span),
    /// `p/q` between integer literals.
    Frac(String, String, Span),
    Var(Name),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>, Span),
    Pow(Box<Expr>, u32, Span),
}

impl Expr {
    pub fn span(&self) -> Span {
        match self {
            Expr::Int(_, s) | Expr::Frac(_, _, s) | Expr::Neg(_, s) | Expr::Pow(_, _, s) => *s,
            Expr::Var(n) => n.span,
            Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => a.span(),
        }
    }

    // 0: sum, 1: product, 2: unary, 3: power, 4: atom
    fn level(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) => 1,
            Expr::Neg(..) => 2,
            Expr::Pow(..) => 3,
            Expr::Int(..) | Expr::Frac(..) | Expr::Var(_) => 4,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.level() < min {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Int(s, _) => f.write_str(s),
            Expr::Frac(p, q, _) => write!(f, "{p}/{q}"),
            Expr::Var(n) => f.write_str(&n.text),
            Expr::Add(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " + ")?;
                b.write_at(f, 1)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 0)?;
                write!(f, " - ")?;
                b.write_at(f, 1)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 1)?;
                write!(f, "*")?;
                b.write_at(f, 2)
            }
            Expr::Neg(a, _) => {
                write!(f, "-")?;
                a.write_at(f, 2)
            }
            Expr::Pow(a, e, _) => {
                a.write_at(f, 4)?;
                write!(f, "^{e}")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldSpec {
    Rational,
    Prime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingDecl {
    pub name: Name,
    pub field: FieldSpec,
    pub vars: Vec<Name>,
    pub order: Option<Name>,
    /// Generators of the ideal quotiented out, after `/`.
    pub modulus: Option<Vec<Expr>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealDecl {
    pub name: Name,
    pub gens: Vec<Expr>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleExpr {
    /// Cokernel of a matrix with `rows` rows; each inner list is one column,
    /// that is, one relation.
    Coker { rows: usize, columns: Vec<Vec<Expr>> },
    Free(usize),
    Sum(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleDecl {
    pub name: Name,
    pub body: ModuleExpr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerExpr {
    Induced { module: Name, levels: u32 },
    /// Explicit levels; transitions are the identity on generators.
    Levels(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerDecl {
    pub name: Name,
    pub body: TowerExpr,
    pub wrt: Option<Name>,
}

/// A morphism of towers given by one matrix used at every level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: Name,
    pub source: Name,
    pub target: Name,
    pub columns: Vec<Vec<Expr>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OptValue {
    Int(u64),
    Name(Name),
    List(Vec<Name>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmdOption {
    pub key: Name,
    pub value: OptValue,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Command {
    pub name: Name,
    pub args: Vec<Name>,
    pub options: Vec<CmdOption>,
}

impl Command {
    pub fn option(&self, key: &str) -> Option<&OptValue> {
        self.options.iter().find(|o| o.key.text == key).map(|o| &o.value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Ring(RingDecl),
    Ideal(IdealDecl),
    Module(ModuleDecl),
    Tower(TowerDecl),
    Morphism(MorphismDecl),
    Command(Command),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Script {
    pub stmts: Vec<Stmt>,
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn matrix(columns: &[Vec<Expr>]) -> String {
    let cols: Vec<String> = columns.iter().map(|c| format!("[{}]", join(c))).collect();
    format!("[{}]", cols.join(", "))
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Ring(r) => {
                let field = match r.field {
                    FieldSpec::Rational => "QQ".to_string(),
                    FieldSpec::Prime(p) => format!("GF({p})"),
                };
                write!(f, "ring {} = {field}[{}]", r.name, join(&r.vars))?;
                if let Some(o) = &r.order {
                    write!(f, " order {o}")?;
                }
                if let Some(m) = &r.modulus {
                    write!(f, " / <{}>", join(m))?;
                }
                write!(f, ";")
            }
            Stmt::Ideal(i) => write!(f, "ideal {} = <{}>;", i.name, join(&i.gens)),
            Stmt::Module(m) => match &m.body {
                ModuleExpr::Coker { rows, columns } => {
                    write!(f, "module {} = coker rows {rows} {};", m.name, matrix(columns))
                }
                ModuleExpr::Free(n) => write!(f, "module {} = free {n};", m.name),
                ModuleExpr::Sum(parts) => {
                    let names: Vec<&str> = parts.iter().map(|n| n.text.as_str()).collect();
                    write!(f, "module {} = sum {};", m.name, names.join(" "))
                }
            },
            Stmt::Tower(t) => {
                match &t.body {
                    TowerExpr::Induced { module, levels } => {
                        write!(f, "tower {} = induced {module} levels {levels}", t.name)?
                    }
                    TowerExpr::Levels(ms) => write!(f, "tower {} = levels [{}]", t.name, join(ms))?,
                }
                if let Some(a) = &t.wrt {
                    write!(f, " wrt {a}")?;
                }
                write!(f, ";")
            }
            Stmt::Morphism(m) => write!(
                f,
                "morphism {} = {} -> {} by {};",
                m.name,
                m.source,
                m.target,
                matrix(&m.columns)
            ),
            Stmt::Command(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        for o in &self.options {
            match &o.value {
                OptValue::Int(n) => write!(f, " {} {n}", o.key)?,
                OptValue::Name(n) => write!(f, " {} {n}", o.key)?,
                OptValue::List(ns) => write!(f, " {} [{}]", o.key, join(ns))?,
            }
        }
        write!(f, ";")
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
