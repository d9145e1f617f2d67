//! Shell syntax for chains.
//!
//! ```text
//! chain  := ["+" | "-"] term (("+" | "-") term)*  |  "0"
//! term   := [int ["*"]] cell
//! cell   := "e" | "e(" n ")" | "y" ["^" n] | word
//!         | "sigma(" n ")" | "tau(" n ")" | "sigma~(" n ")" | "tau~(" n ")"
//!         | "beta(" k "," s ")"
//! word   := letter ("." letter)*
//! letter := "a" n ["^" m]
//! ```
//!
//! Dimensions come from the named cells and `y`; bare words and `e` take
//! the dimension of the other terms, or the one given explicitly. A word
//! alone defaults to the smallest dimension holding its largest letter.

use num_bigint::BigInt;
use num_traits::One;

use crate::chain::Chain;
use crate::error::{MorseError, Result};
use crate::flow::NamedCell;
use crate::simplicial::Simplex;

enum Cell {
    /// Dimension fixed by the syntax.
    Fixed(Simplex),
    /// A word whose dimension is only bounded below.
    Word { word: Vec<usize>, min_dim: usize },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

fn err(msg: impl Into<String>) -> MorseError {
    MorseError::Parse(msg.into())
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(err(format!("expected `{s}` at offset {} in `{}`", self.pos, self.src)))
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        self.digits()
            .ok_or_else(|| err(format!("expected a number at offset {} in `{}`", self.pos, self.src)))?
            .parse()
            .map_err(|_| err("number too large"))
    }

    fn exponent(&mut self) -> Result<usize> {
        if self.eat("^") {
            self.number()
        } else {
            Ok(1)
        }
    }

    fn call(&mut self) -> Result<usize> {
        self.expect("(")?;
        let n = self.number()?;
        self.expect(")")?;
        Ok(n)
    }

    fn cell(&mut self) -> Result<Cell> {
        self.skip_ws();
        let named = |c: NamedCell| c.expand().map(Cell::Fixed);
        if self.eat("sigma~") {
            let r = self.call()?;
            return named(NamedCell::SigmaTilde { r });
        }
        if self.eat("sigma") {
            let k = self.call()?;
            return named(NamedCell::Sigma { k });
        }
        if self.eat("tau~") {
            let r = self.call()?;
            return named(NamedCell::TauTilde { r });
        }
        if self.eat("tau") {
            let k = self.call()?;
            return named(NamedCell::Tau { k });
        }
        if self.eat("beta") {
            self.expect("(")?;
            let k = self.number()?;
            self.expect(",")?;
            let s = self.number()?;
            self.expect(")")?;
            return named(NamedCell::Beta { k, s });
        }
        if self.eat("y") {
            let r = self.exponent()?;
            return Ok(Cell::Fixed(Simplex::y_power(r)));
        }
        if self.eat("e") {
            self.skip_ws();
            if self.peek() == Some('(') {
                let dim = self.call()?;
                return Ok(Cell::Fixed(Simplex::identity(dim)));
            }
            return Ok(Cell::Word {
                word: Vec::new(),
                min_dim: 0,
            });
        }
        if self.peek() == Some('a') {
            let mut word = Vec::new();
            loop {
                self.expect("a")?;
                let k = self.number()?;
                let run = self.exponent()?;
                word.extend(std::iter::repeat_n(k, run));
                if !self.eat(".") {
                    break;
                }
            }
            let min_dim = word.iter().copied().max().unwrap_or(0);
            return Ok(Cell::Word { word, min_dim });
        }
        Err(err(format!("expected a cell at offset {} in `{}`", self.pos, self.src)))
    }

    fn term(&mut self) -> Result<(BigInt, Cell)> {
        let coef = match self.digits() {
            Some(d) => {
                let c: BigInt = d.parse().map_err(|_| err("bad integer"))?;
                self.eat("*");
                c
            }
            None => BigInt::one(),
        };
        Ok((coef, self.cell()?))
    }
}

/// Parses a chain; `dim` pins the dimension when the text leaves it open.
pub fn parse_chain(text: &str, dim: Option<usize>) -> Result<Chain> {
    let mut p = Parser { src: text, pos: 0 };
    if p.src.trim() == "0" {
        return Ok(Chain::zero(
            dim.ok_or_else(|| err("the zero chain needs an explicit dimension"))?,
        ));
    }
    let mut terms = Vec::new();
    let mut sign = if p.eat("-") {
        -BigInt::one()
    } else {
        p.eat("+");
        BigInt::one()
    };
    loop {
        let (coef, cell) = p.term()?;
        terms.push((sign * coef, cell));
        if p.eat("+") {
            sign = BigInt::one();
        } else if p.eat("-") {
            sign = -BigInt::one();
        } else {
            break;
        }
    }
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(err(format!("unexpected `{}`", &p.src[p.pos..])));
    }

    let mut fixed = dim;
    for (_, cell) in &terms {
        if let Cell::Fixed(x) = cell {
            match fixed {
                Some(d) if d != x.dim() => {
                    return Err(MorseError::DimensionMismatch {
                        expected: d,
                        found: x.dim(),
                    })
                }
                _ => fixed = Some(x.dim()),
            }
        }
    }
    let dim = match fixed {
        Some(d) => d,
        None => {
            let min = terms
                .iter()
                .map(|(_, c)| match c {
                    Cell::Word { min_dim, .. } => *min_dim,
                    Cell::Fixed(x) => x.dim(),
                })
                .max()
                .unwrap_or(0);
            if min == 0 && terms.iter().any(|(_, c)| matches!(c, Cell::Word { word, .. } if !word.is_empty())) {
                return Err(err("generator index 0 does not exist"));
            }
            min
        }
    };
    let cells = terms
        .into_iter()
        .map(|(c, cell)| {
            let x = match cell {
                Cell::Fixed(x) => x,
                Cell::Word { word, .. } => Simplex::new(dim, word)?,
            };
            Ok((c, x))
        })
        .collect::<Result<Vec<_>>>()?;
    Chain::from_terms(dim, cells)
}
