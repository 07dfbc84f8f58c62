//! Grothendieck ring of varieties, modelled through classes of atoms.
//!
//! An atom is a named variety known only through its dimension and its
//! E-polynomial in `u, v`. A [`K0Class`] is an integer polynomial in atom
//! names; products of atoms are products of varieties and the empty
//! product is the point. The Lefschetz class `L = [ℂ]` is always available
//! with `E(L) = uv`.

pub mod constructible;
pub mod tower;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use crate::ring::parse::{parse_expr, Grammar};
use crate::ring::poly::MultiPoly;
use crate::ring::{Error, Rational, Result};

pub use constructible::{pushforward_cf, ConstructibleFunction, RelativeClass, StratifiedMap, StratifiedSpace, Stratum};
pub use tower::{pro_euler, pro_grothendieck, ProClass, TowerDatum};

pub const LEFSCHETZ: &str = "L";
pub const POINT: &str = "pt";
const RESERVED: [&str; 5] = ["pt", "u", "v", "y", "t"];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atom {
    name: String,
    dimension: u32,
    e_poly: MultiPoly,
}

impl Atom {
    /// Checks that the E-polynomial uses only `u, v`, has integer
    /// coefficients and total degree at most twice the dimension.
    pub fn new(name: &str, dimension: u32, e_poly: MultiPoly) -> Result<Self> {
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(Error::invalid(format!("invalid atom name `{name}`")));
        }
        if name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(Error::invalid(format!("atom name `{name}` starts with a digit")));
        }
        if RESERVED.contains(&name) {
            return Err(Error::invalid(format!("atom name `{name}` is reserved")));
        }
        if let Some(v) = e_poly.vars().iter().find(|v| *v != "u" && *v != "v") {
            return Err(Error::invalid(format!("E-polynomial of `{name}` uses `{v}`; only u and v are allowed")));
        }
        if !e_poly.is_integral() {
            return Err(Error::invalid(format!("E-polynomial of `{name}` has non-integer coefficients")));
        }
        if e_poly.total_degree() > 2 * dimension {
            return Err(Error::invalid(format!(
                "E-polynomial of `{name}` has degree {} > 2 * dim = {}",
                e_poly.total_degree(),
                2 * dimension
            )));
        }
        Ok(Atom { name: name.to_string(), dimension, e_poly })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn e_poly(&self) -> &MultiPoly {
        &self.e_poly
    }
}

/// Element of K₀: an integer polynomial in atom names.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct K0Class(MultiPoly);

impl K0Class {
    pub fn from_poly(p: MultiPoly) -> Result<Self> {
        if !p.is_integral() {
            return Err(Error::invalid(format!("class {p} has non-integer coefficients")));
        }
        Ok(K0Class(p))
    }

    pub fn zero() -> Self {
        K0Class(MultiPoly::zero())
    }

    pub fn point() -> Self {
        K0Class(MultiPoly::one())
    }

    pub fn int(n: i64) -> Self {
        K0Class(MultiPoly::int(n))
    }

    pub fn lefschetz() -> Self {
        Self::atom(LEFSCHETZ)
    }

    pub fn atom(name: &str) -> Self {
        K0Class(MultiPoly::var(name))
    }

    /// `[ℂ^n] = L^n`.
    pub fn affine(n: u32) -> Self {
        K0Class(MultiPoly::var(LEFSCHETZ).pow(n))
    }

    /// `[P^n] = 1 + L + ... + L^n`.
    pub fn projective(n: u32) -> Self {
        (0..=n).fold(Self::zero(), |acc, i| acc + Self::affine(i))
    }

    pub fn as_poly(&self) -> &MultiPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn pow(&self, e: u32) -> Self {
        K0Class(self.0.pow(e))
    }

    /// Terms as (atom exponents, integer coefficient).
    pub fn terms(&self) -> Vec<(Vec<(&str, u32)>, BigInt)> {
        self.0.named_terms().into_iter().map(|(m, c)| (m, c.to_integer())).collect()
    }
}

impl fmt::Display for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for K0Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "K0Class({})", self.0)
    }
}

macro_rules! class_op {
    ($tr:ident, $m:ident) => {
        impl $tr for K0Class {
            type Output = K0Class;
            fn $m(self, rhs: K0Class) -> K0Class {
                K0Class((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a K0Class> for &'a K0Class {
            type Output = K0Class;
            fn $m(self, rhs: &'a K0Class) -> K0Class {
                K0Class((&self.0).$m(&rhs.0))
            }
        }
    };
}

class_op!(Add, add);
class_op!(Sub, sub);
class_op!(Mul, mul);

impl Neg for K0Class {
    type Output = K0Class;
    fn neg(self) -> K0Class {
        K0Class(-self.0)
    }
}

/// Registry of atoms; always contains `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomTable {
    atoms: BTreeMap<String, Atom>,
}

impl Default for AtomTable {
    fn default() -> Self {
        let l = Atom::new(LEFSCHETZ, 1, &MultiPoly::var("u") * &MultiPoly::var("v")).expect("valid atom");
        AtomTable { atoms: BTreeMap::from([(LEFSCHETZ.to_string(), l)]) }
    }
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, atom: Atom) -> Result<()> {
        if self.atoms.contains_key(atom.name()) {
            return Err(Error::invalid(format!("atom `{}` is already defined", atom.name())));
        }
        self.atoms.insert(atom.name.clone(), atom);
        Ok(())
    }

    pub fn with_atom(mut self, atom: Atom) -> Result<Self> {
        self.insert(atom)?;
        Ok(self)
    }

    pub fn get(&self, name: &str) -> Option<&Atom> {
        self.atoms.get(name)
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.values()
    }

    /// Read a class expression over the known atoms; `pt` is the unit.
    pub fn parse_class(&self, text: &str) -> Result<K0Class> {
        let names: Vec<&str> = self.atoms.keys().map(String::as_str).collect();
        let grammar = Grammar::with_vars(&names).define(POINT, MultiPoly::one());
        K0Class::from_poly(parse_expr(text, &grammar)?)
    }

    fn check_known(&self, a: &K0Class) -> Result<()> {
        match a.0.vars().iter().find(|v| !self.atoms.contains_key(*v)) {
            Some(v) => Err(Error::UnknownVariable { name: v.clone(), offset: 0 }),
            None => Ok(()),
        }
    }

    /// Hodge–Deligne realization `E(u, v)`.
    pub fn e_polynomial(&self, a: &K0Class) -> Result<MultiPoly> {
        self.check_known(a)?;
        Ok(a.0.vars().iter().fold(a.0.clone(), |acc, name| acc.substitute(name, &self.atoms[name].e_poly)))
    }

    /// `E(-y, 1)`.
    pub fn chi_y(&self, a: &K0Class) -> Result<MultiPoly> {
        let e = self.e_polynomial(a)?;
        Ok(e.substitute("u", &-MultiPoly::var("y")).eval("v", &Rational::from_integer(1.into())))
    }

    /// `E(1, 1)`, the compactly supported Euler characteristic.
    pub fn euler(&self, a: &K0Class) -> Result<BigInt> {
        let one = Rational::from_integer(1.into());
        let e = self.e_polynomial(a)?.eval("u", &one).eval("v", &one);
        Ok(e.constant_term().to_integer())
    }

    /// Dimension of a class: the largest dimension of a monomial in it.
    pub fn dimension(&self, a: &K0Class) -> Result<Option<u32>> {
        self.check_known(a)?;
        Ok(a.terms()
            .iter()
            .map(|(mono, _)| mono.iter().map(|(n, e)| self.atoms[*n].dimension * e).sum())
            .max())
    }
}

/// `[Bl] - [E] = [X] - [Y]`.
pub fn blowup_relation_check(x: &K0Class, y: &K0Class, blowup: &K0Class, exceptional: &K0Class) -> bool {
    blowup - exceptional == x - y
}

pub fn euler_of_class(a: &K0Class) -> Result<BigInt> {
    AtomTable::default().euler(a)
}

pub fn chi_y_of_class(a: &K0Class) -> Result<MultiPoly> {
    AtomTable::default().chi_y(a)
}

pub fn e_polynomial(a: &K0Class) -> Result<MultiPoly> {
    AtomTable::default().e_polynomial(a)
}
