use std::collections::HashMap;

use super::element::{integer, Coeff, Monomial, RingElement};
use super::generator::Generator;
use crate::error::{Error, Result};

/// Antisymmetric bracket table on generators, extended by bilinearity and Leibniz.
///
/// Parameters and spectral variables are always known and central. Other
/// generators must be declared; any pair of declared generators missing from
/// the table Poisson-commutes.
#[derive(Clone, Debug, Default)]
pub struct PoissonStructure {
    declared: Vec<Generator>,
    table: HashMap<(Generator, Generator), RingElement>,
}

impl PoissonStructure {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Canonical pairs `{X_j, x_k} = δ_jk`, i.e. `{X_j, u_k} = δ_jk u_k`, for `j, k = 1..=sites`.
    pub fn canonical(sites: usize) -> Self {
        let mut ps = Self::empty();
        for j in 1..=sites {
            ps.declare(Generator::X(j));
            ps.declare(Generator::U(j));
            ps.set(Generator::X(j), Generator::U(j), RingElement::gen(Generator::U(j)))
                .expect("fresh entry");
        }
        ps
    }

    /// Adds `E, F, H` with `{H,E} = E`, `{H,F} = -F`, `{E,F} = 2H`.
    pub fn with_sl2(mut self) -> Self {
        for g in [Generator::E, Generator::F, Generator::H] {
            self.declare(g);
        }
        let e = RingElement::gen(Generator::E);
        let f = RingElement::gen(Generator::F);
        let h = RingElement::gen(Generator::H);
        self.set(Generator::H, Generator::E, e).expect("fresh entry");
        self.set(Generator::H, Generator::F, -f).expect("fresh entry");
        self.set(Generator::E, Generator::F, h.scale(&integer(2)))
            .expect("fresh entry");
        self
    }

    /// Builds a structure from explicit entries; both orientations are stored.
    pub fn from_table<I>(generators: &[Generator], entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Generator, Generator, RingElement)>,
    {
        let mut ps = Self::empty();
        for &g in generators {
            ps.declare(g);
        }
        for (a, b, v) in entries {
            for g in [a, b] {
                if !ps.knows(g) {
                    return Err(Error::UnknownGenerator(g));
                }
            }
            ps.set(a, b, v)?;
        }
        Ok(ps)
    }

    fn declare(&mut self, g: Generator) {
        if !g.is_central() && !self.declared.contains(&g) {
            self.declared.push(g);
        }
    }

    fn set(&mut self, a: Generator, b: Generator, value: RingElement) -> Result<()> {
        if a == b {
            return if value.is_zero() {
                Ok(())
            } else {
                Err(Error::InconsistentBracket(a, b))
            };
        }
        if a.is_central() || b.is_central() {
            return if value.is_zero() {
                Ok(())
            } else {
                Err(Error::InconsistentBracket(a, b))
            };
        }
        let neg = -&value;
        if let Some(existing) = self.table.get(&(a, b)) {
            if *existing != value {
                return Err(Error::InconsistentBracket(a, b));
            }
        }
        self.table.insert((a, b), value);
        self.table.insert((b, a), neg);
        Ok(())
    }

    pub fn knows(&self, g: Generator) -> bool {
        g.is_central() || self.declared.contains(&g)
    }

    pub fn generators(&self) -> &[Generator] {
        &self.declared
    }

    pub fn has_sl2(&self) -> bool {
        self.declared.contains(&Generator::E)
    }

    /// `{a, b}` on generators.
    pub fn generator_bracket(&self, a: Generator, b: Generator) -> Result<RingElement> {
        for g in [a, b] {
            if !self.knows(g) {
                return Err(Error::UnknownGenerator(g));
            }
        }
        Ok(self.table.get(&(a, b)).cloned().unwrap_or_default())
    }

    fn check_known(&self, f: &RingElement) -> Result<()> {
        for g in f.generators() {
            if !self.knows(g) {
                return Err(Error::UnknownGenerator(g));
            }
        }
        Ok(())
    }

    fn monomial_bracket(&self, m: &Monomial, n: &Monomial, coeff: &Coeff, out: &mut RingElement) {
        for &(a, p) in m.powers() {
            if a.is_central() {
                continue;
            }
            for &(b, q) in n.powers() {
                if b.is_central() {
                    continue;
                }
                let Some(value) = self.table.get(&(a, b)) else {
                    continue;
                };
                let scale = coeff * integer(p as i64 * q as i64);
                let prefix = m.lower(a).mul(&n.lower(b));
                for (vm, vc) in value.terms() {
                    out.add_term(prefix.mul(vm), &scale * vc);
                }
            }
        }
    }

    /// `{f, g}`: bilinear, antisymmetric, Leibniz in both slots.
    pub fn bracket(&self, f: &RingElement, g: &RingElement) -> Result<RingElement> {
        self.check_known(f)?;
        self.check_known(g)?;
        let mut out = RingElement::zero();
        for (m, c) in f.terms() {
            for (n, d) in g.terms() {
                self.monomial_bracket(m, n, &(c * d), &mut out);
            }
        }
        Ok(out)
    }

    /// `{a,{b,c}} + {b,{c,a}} + {c,{a,b}}`.
    pub fn jacobiator(&self, a: &RingElement, b: &RingElement, c: &RingElement) -> Result<RingElement> {
        let t1 = self.bracket(a, &self.bracket(b, c)?)?;
        let t2 = self.bracket(b, &self.bracket(c, a)?)?;
        let t3 = self.bracket(c, &self.bracket(a, b)?)?;
        Ok(&(&t1 + &t2) + &t3)
    }

    /// `H^2 + EF`.
    pub fn casimir(&self) -> Result<RingElement> {
        if !self.has_sl2() {
            return Err(Error::UnknownGenerator(Generator::E));
        }
        let h = RingElement::gen(Generator::H);
        let ef = &RingElement::gen(Generator::E) * &RingElement::gen(Generator::F);
        Ok(&(&h * &h) + &ef)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(x: Generator) -> RingElement {
        RingElement::gen(x)
    }

    #[test]
    fn canonical_pair() {
        let ps = PoissonStructure::canonical(2);
        assert_eq!(ps.bracket(&g(Generator::X(1)), &g(Generator::U(1))).unwrap(), g(Generator::U(1)));
        assert!(ps.bracket(&g(Generator::X(1)), &g(Generator::U(2))).unwrap().is_zero());
    }

    #[test]
    fn momentum_on_squared_exponential() {
        // {X_1, u_1^2} = 2 u_1^2, by Leibniz.
        let ps = PoissonStructure::canonical(1);
        let u1 = g(Generator::U(1));
        let got = ps.bracket(&g(Generator::X(1)), &(&u1 * &u1)).unwrap();
        assert_eq!(got, (&u1 * &u1).scale(&integer(2)));
    }

    #[test]
    fn sl2_table() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        assert_eq!(ps.bracket(&g(Generator::H), &g(Generator::E)).unwrap(), g(Generator::E));
        assert_eq!(ps.bracket(&g(Generator::H), &g(Generator::F)).unwrap(), -g(Generator::F));
        assert_eq!(
            ps.bracket(&g(Generator::E), &g(Generator::F)).unwrap(),
            g(Generator::H).scale(&integer(2))
        );
        assert!(ps.bracket(&g(Generator::E), &g(Generator::X(1))).unwrap().is_zero());
    }

    #[test]
    fn casimir_is_central() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        let c = ps.casimir().unwrap();
        for x in [Generator::E, Generator::F, Generator::H] {
            assert!(ps.bracket(&c, &g(x)).unwrap().is_zero(), "{{C, {x}}}");
        }
        let at_origin = c.evaluate(&|_| 0.0);
        assert_eq!(at_origin, 0.0);
    }

    #[test]
    fn unknown_generator_is_structural_error() {
        let ps = PoissonStructure::canonical(1);
        assert_eq!(
            ps.bracket(&g(Generator::X(2)), &g(Generator::U(1))),
            Err(Error::UnknownGenerator(Generator::X(2)))
        );
        assert_eq!(ps.casimir(), Err(Error::UnknownGenerator(Generator::E)));
    }

    #[test]
    fn parameters_are_central() {
        let ps = PoissonStructure::canonical(1).with_sl2();
        let theta = g(Generator::Param(super::super::Param::Theta1));
        for x in [Generator::X(1), Generator::U(1), Generator::E, Generator::H] {
            assert!(ps.bracket(&theta, &g(x)).unwrap().is_zero());
        }
    }

    #[test]
    fn conflicting_table_rejected() {
        let gens = [Generator::E, Generator::F];
        let r = PoissonStructure::from_table(
            &gens,
            [
                (Generator::E, Generator::F, g(Generator::E)),
                (Generator::F, Generator::E, g(Generator::E)),
            ],
        );
        assert_eq!(r.unwrap_err(), Error::InconsistentBracket(Generator::F, Generator::E));
    }
}
