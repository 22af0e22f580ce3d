//! Element recipes: small expressions over named automorphisms.
//!
//! ```text
//! expr    := power ('*' power)*
//! power   := atom ('^' int)?
//! atom    := 'id' | 'phi' '(' int ')' | 'c' '(' int ',' int ')'
//!          | 'm' '(' int ',' int ',' int ')' | nielsen
//!          | '[' expr ',' expr ']' | '(' expr ')'
//! nielsen := 'r' '(' int ',' int ')' | 'l' '(' int ',' int ')'
//!          | 'i' '(' int ')' | 's' '(' int ',' int ')'
//! ```
//!
//! `x * y` applies `y` first. `[x, y]` is `x y x^-1 y^-1`.

use std::fmt;

use anyhow::{anyhow, bail, Result};
use homrep_core::{Automorphism, NielsenMove};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Recipe {
    Identity,
    Phi(u32),
    Conjugation(usize, usize),
    Commutator(usize, usize, usize),
    Nielsen(NielsenMove),
    Product(Box<Recipe>, Box<Recipe>),
    Power(Box<Recipe>, i64),
    Bracket(Box<Recipe>, Box<Recipe>),
}

impl Recipe {
    pub fn parse(text: &str) -> Result<Recipe> {
        let mut p = Parser { src: text.as_bytes(), pos: 0 };
        let r = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            bail!("unexpected `{}` at offset {} in recipe", &text[p.pos..], p.pos);
        }
        Ok(r)
    }

    pub fn build(&self, rank: usize) -> Result<Automorphism> {
        Ok(match self {
            Recipe::Identity => Automorphism::identity(rank),
            Recipe::Phi(e) => Automorphism::paper_phi(rank, *e)?,
            Recipe::Conjugation(i, j) => Automorphism::conjugation_move(rank, *i, *j)?,
            Recipe::Commutator(i, j, k) => Automorphism::commutator_move(rank, *i, *j, *k)?,
            Recipe::Nielsen(mv) => Automorphism::nielsen(rank, *mv)?,
            Recipe::Product(a, b) => a.build(rank)?.compose(&b.build(rank)?)?,
            Recipe::Power(a, e) => a.build(rank)?.power(*e)?,
            Recipe::Bracket(a, b) => a.build(rank)?.commutator(&b.build(rank)?)?,
        })
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Recipe::Identity => write!(f, "id"),
            Recipe::Phi(e) => write!(f, "phi({e})"),
            Recipe::Conjugation(i, j) => write!(f, "c({i},{j})"),
            Recipe::Commutator(i, j, k) => write!(f, "m({i},{j},{k})"),
            Recipe::Nielsen(NielsenMove::RightTransvection { i, j }) => write!(f, "r({i},{j})"),
            Recipe::Nielsen(NielsenMove::LeftTransvection { i, j }) => write!(f, "l({i},{j})"),
            Recipe::Nielsen(NielsenMove::Inversion { i }) => write!(f, "i({i})"),
            Recipe::Nielsen(NielsenMove::Swap { i, j }) => write!(f, "s({i},{j})"),
            Recipe::Product(a, b) => write!(f, "({a}*{b})"),
            Recipe::Power(a, e) => write!(f, "({a})^{e}"),
            Recipe::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(anyhow!("expected `{}` at offset {} in recipe", c as char, self.pos))
        }
    }

    fn expr(&mut self) -> Result<Recipe> {
        let mut left = self.power()?;
        while self.eat(b'*') {
            let right = self.power()?;
            left = Recipe::Product(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn power(&mut self) -> Result<Recipe> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let e = self.int()?;
            return Ok(Recipe::Power(Box::new(base), e));
        }
        Ok(base)
    }

    fn int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])?
            .parse()
            .map_err(|_| anyhow!("expected integer at offset {start} in recipe"))
    }

    fn index(&mut self) -> Result<usize> {
        let at = self.pos;
        usize::try_from(self.int()?).map_err(|_| anyhow!("negative index at offset {at} in recipe"))
    }

    fn args(&mut self, n: usize) -> Result<Vec<usize>> {
        self.expect(b'(')?;
        let mut out = vec![self.index()?];
        for _ in 1..n {
            self.expect(b',')?;
            out.push(self.index()?);
        }
        self.expect(b')')?;
        Ok(out)
    }

    fn name(&mut self) -> &str {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_alphabetic) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).expect("ascii")
    }

    fn atom(&mut self) -> Result<Recipe> {
        if self.eat(b'(') {
            let r = self.expr()?;
            self.expect(b')')?;
            return Ok(r);
        }
        if self.eat(b'[') {
            let a = self.expr()?;
            self.expect(b',')?;
            let b = self.expr()?;
            self.expect(b']')?;
            return Ok(Recipe::Bracket(Box::new(a), Box::new(b)));
        }
        let at = self.pos;
        let name = self.name().to_string();
        Ok(match name.as_str() {
            "id" => Recipe::Identity,
            "phi" => {
                self.expect(b'(')?;
                let e = self.int()?;
                self.expect(b')')?;
                Recipe::Phi(u32::try_from(e).map_err(|_| anyhow!("phi exponent must be nonnegative"))?)
            }
            "c" => {
                let a = self.args(2)?;
                Recipe::Conjugation(a[0], a[1])
            }
            "m" => {
                let a = self.args(3)?;
                Recipe::Commutator(a[0], a[1], a[2])
            }
            "r" => {
                let a = self.args(2)?;
                Recipe::Nielsen(NielsenMove::RightTransvection { i: a[0], j: a[1] })
            }
            "l" => {
                let a = self.args(2)?;
                Recipe::Nielsen(NielsenMove::LeftTransvection { i: a[0], j: a[1] })
            }
            "i" => Recipe::Nielsen(NielsenMove::Inversion { i: self.args(1)?[0] }),
            "s" => {
                let a = self.args(2)?;
                Recipe::Nielsen(NielsenMove::Swap { i: a[0], j: a[1] })
            }
            "" => bail!("expected an element at offset {at} in recipe"),
            other => bail!("unknown element `{other}` at offset {at} in recipe"),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_nested_expressions() {
        let r = Recipe::parse("[c(1,2), m(2,1,3)^-2] * phi(2)").unwrap();
        let expected = Recipe::Product(
            Box::new(Recipe::Bracket(
                Box::new(Recipe::Conjugation(1, 2)),
                Box::new(Recipe::Power(Box::new(Recipe::Commutator(2, 1, 3)), -2)),
            )),
            Box::new(Recipe::Phi(2)),
        );
        assert_eq!(r, expected);
        assert_eq!(Recipe::parse(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn phi_recipe_matches_nielsen_recipe() {
        let a = Recipe::parse("phi(2)").unwrap().build(3).unwrap();
        let b = Recipe::parse("r(1,2)^2 * r(1,3)^2 * r(1,2)^-2 * r(1,3)^-2").unwrap().build(3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_malformed_recipes() {
        for bad in ["", "c(1)", "q(1,2)", "[c(1,2)]", "c(1,2) c(2,1)", "phi(-1)", "c(1,2)^"] {
            assert!(Recipe::parse(bad).is_err(), "{bad}");
        }
        assert!(Recipe::parse("c(1,4)").unwrap().build(3).is_err());
    }
}
