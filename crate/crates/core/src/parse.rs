//! Text forms of functions and weights.
//!
//! Functions use a prefix grammar; every `Display` output parses back to an
//! equal tree. Weights are ` + `-joined terms with an optional `c *` scale.
//! See `docs/grammar.md`.

use crate::error::{Error, Result};
use crate::factorize::OuterFunction;
use crate::functions::{AnalyticFunction, HarmonicFunction};
use crate::measures::RieszMeasure;
use num_complex::Complex64;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Clone, Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Word(&'a str),
}

#[derive(Clone, Debug)]
struct Token<'a> {
    tok: Tok<'a>,
    line: usize,
    column: usize,
}

fn tokenize(src: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    for (li, line) in src.lines().enumerate() {
        let bytes = line.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let c = bytes[i];
            if c.is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let (tok, len) = match c {
                b'(' => (Tok::Open, 1),
                b')' => (Tok::Close, 1),
                _ => {
                    let end = bytes[i..]
                        .iter()
                        .position(|&b| b.is_ascii_whitespace() || b == b'(' || b == b')')
                        .map_or(bytes.len(), |k| i + k);
                    (Tok::Word(&line[i..end]), end - i)
                }
            };
            out.push(Token {
                tok,
                line: li + 1,
                column: i + 1,
            });
            i += len;
        }
    }
    out
}

/// Parses `1.5`, `-2i`, `i`, `0.3-0.4i`, `1e-3+2e-4i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let real = |t: &str| t.parse::<f64>().ok().filter(|x| x.is_finite());
    let Some(body) = s.strip_suffix('i') else {
        return real(s).map(|x| Complex64::new(x, 0.0));
    };
    let imag = |t: &str| match t {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => real(t),
    };
    // split at the last sign that does not belong to an exponent
    let b = body.as_bytes();
    let split = (1..b.len())
        .rev()
        .find(|&k| (b[k] == b'+' || b[k] == b'-') && !matches!(b[k - 1], b'e' | b'E'));
    match split {
        Some(k) => Some(Complex64::new(real(&body[..k])?, imag(&body[k..])?)),
        None => Some(Complex64::new(0.0, imag(body)?)),
    }
}

struct Parser<'a> {
    toks: Vec<Token<'a>>,
    pos: usize,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        let last = src.lines().enumerate().last();
        let end = last.map_or((1, 1), |(i, l)| (i + 1, l.len() + 1));
        Self {
            toks: tokenize(src),
            pos: 0,
            end,
        }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, column) = self.toks.get(self.pos).map_or(self.end, |t| (t.line, t.column));
        Err(Error::Parse {
            line,
            column,
            message: msg.into(),
        })
    }

    fn peek(&self) -> Option<&Tok<'a>> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn finish(&self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn word(&mut self, what: &str) -> Result<&'a str> {
        match self.peek() {
            Some(Tok::Word(w)) => {
                let w = *w;
                self.pos += 1;
                Ok(w)
            }
            _ => self.err(format!("expected {what}")),
        }
    }

    fn expect(&mut self, t: Tok<'static>, what: &str) -> Result<()> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn number(&mut self, what: &str) -> Result<f64> {
        let start = self.pos;
        let w = self.word(what)?;
        match w.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(x),
            _ => {
                self.pos = start;
                self.err(format!("expected {what}, found `{w}`"))
            }
        }
    }

    fn count(&mut self, what: &str) -> Result<u32> {
        let start = self.pos;
        let w = self.word(what)?;
        w.parse::<u32>().or_else(|_| {
            self.pos = start;
            self.err(format!("expected {what}, found `{w}`"))
        })
    }

    fn complex(&mut self, what: &str) -> Result<Complex64> {
        let start = self.pos;
        let w = self.word(what)?;
        parse_complex(w).map_or_else(
            || {
                self.pos = start;
                self.err(format!("expected {what}, found `{w}`"))
            },
            Ok,
        )
    }

    fn next_is_word(&self) -> bool {
        matches!(self.peek(), Some(Tok::Word(_)))
    }

    /// Builds a node, reporting domain errors at the node's first token.
    fn check<T>(&mut self, start: usize, r: Result<T>) -> Result<T> {
        r.or_else(|e| {
            self.pos = start;
            self.err(e.to_string())
        })
    }

    fn function(&mut self) -> Result<AnalyticFunction> {
        let start = self.pos;
        if self.peek() == Some(&Tok::Open) {
            self.pos += 1;
            let head = self.word("operator after `(`")?;
            let f = match head {
                "poly" => {
                    let mut c = Vec::new();
                    while self.next_is_word() {
                        c.push(self.complex("coefficient")?);
                    }
                    let r = AnalyticFunction::polynomial(c);
                    self.check(start, r)?
                }
                "blaschke" => {
                    let m = self.count("origin order")?;
                    let mut zs = Vec::new();
                    while self.next_is_word() {
                        zs.push(self.complex("zero")?);
                    }
                    let r = AnalyticFunction::blaschke(zs, m);
                    self.check(start, r)?
                }
                "mul" | "add" => {
                    let mut fs = Vec::new();
                    while !self.at_end() && self.peek() != Some(&Tok::Close) {
                        fs.push(self.function()?);
                    }
                    if head == "mul" {
                        AnalyticFunction::product(fs)
                    } else {
                        AnalyticFunction::sum(fs)
                    }
                }
                _ => {
                    // plain grouping
                    self.pos -= 1;
                    self.function()?
                }
            };
            self.expect(Tok::Close, "`)`")?;
            return Ok(f);
        }
        let head = self.word("function")?;
        let f = match head {
            "z" => AnalyticFunction::identity(),
            "const" => AnalyticFunction::constant(self.complex("constant")?),
            "mono" => AnalyticFunction::monomial(self.count("exponent")?),
            "affine" => {
                let a = self.complex("coefficient")?;
                AnalyticFunction::affine(a, self.complex("coefficient")?)
            }
            "mobius" => {
                let mut c = [Complex64::new(0.0, 0.0); 4];
                for x in &mut c {
                    *x = self.complex("coefficient")?;
                }
                let r = AnalyticFunction::mobius(c[0], c[1], c[2], c[3]);
                self.check(start, r)?
            }
            "pow" => {
                let a = self.number("exponent")?;
                let r = AnalyticFunction::power_branch(a);
                self.check(start, r)?
            }
            "taylor" => {
                let a = self.number("exponent")?;
                let n = self.count("degree")?;
                let r = AnalyticFunction::power_branch_taylor(a, n as usize);
                self.check(start, r)?
            }
            "powr" => {
                let e = self.number("exponent")?;
                let base = self.function()?;
                let r = base.powr(e);
                self.check(start, r)?
            }
            "scale" => {
                let c = self.complex("scale factor")?;
                self.function()?.scale(c)
            }
            "outer" => {
                let s = self.number("exponent")?;
                self.expect(Tok::Open, "`(` before the weight")?;
                let nu = self.weight()?;
                self.expect(Tok::Close, "`)` after the weight")?;
                let r = OuterFunction::from_measure(&nu);
                let a = self.check(start, r)?;
                AnalyticFunction::outer(Arc::new(a), s)
            }
            w => {
                self.pos = start;
                return self.err(format!("unknown function `{w}`"));
            }
        };
        Ok(f)
    }

    fn weight(&mut self) -> Result<RieszMeasure> {
        let mut scale = None;
        if let (Some(Tok::Word(c)), Some(Tok::Word("*"))) = (self.peek(), self.toks.get(self.pos + 1).map(|t| &t.tok)) {
            let start = self.pos;
            let c = c.parse::<f64>().or_else(|_| self.err("expected scale factor"))?;
            self.pos += 2;
            scale = Some((start, c));
        }
        let mut nu = self.weight_term()?;
        while self.peek() == Some(&Tok::Word("+")) {
            self.pos += 1;
            nu = nu.sum(&self.weight_term()?);
        }
        if let Some((start, c)) = scale {
            let r = nu.scale(c);
            nu = self.check(start, r)?;
        }
        Ok(nu)
    }

    fn numbers_until_term(&mut self) -> Vec<(usize, &'a str)> {
        let mut out = Vec::new();
        while let Some(Tok::Word(w)) = self.peek() {
            if *w == "+" || matches!(*w, "atom" | "radial" | "classical") {
                break;
            }
            out.push((self.pos, *w));
            self.pos += 1;
        }
        out
    }

    fn weight_term(&mut self) -> Result<RieszMeasure> {
        let start = self.pos;
        let head = self.word("weight term")?;
        let args = self.numbers_until_term();
        let after = self.pos;
        let real = |p: &mut Self, (i, w): (usize, &str)| -> Result<f64> {
            match w.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                _ => {
                    p.pos = i;
                    p.err(format!("expected a number, found `{w}`"))
                }
            }
        };
        let nu = match (head, args.len()) {
            ("classical", 0) => Ok(RieszMeasure::classical()),
            ("atom", 2) => {
                let (i, w) = args[0];
                let Some(z) = parse_complex(w) else {
                    self.pos = i;
                    return self.err(format!("expected an atom location, found `{w}`"));
                };
                let m = real(self, args[1])?;
                RieszMeasure::atom(z, m)
            }
            ("atom", 3) => {
                let re = real(self, args[0])?;
                let im = real(self, args[1])?;
                let m = real(self, args[2])?;
                RieszMeasure::atom(Complex64::new(re, im), m)
            }
            ("radial", 1..=3) => {
                let beta = real(self, args[0])?;
                let kappa = args.get(1).map(|&a| real(self, a)).transpose()?.unwrap_or(1.0);
                let s_max = args.get(2).map(|&a| real(self, a)).transpose()?.unwrap_or(1.0);
                RieszMeasure::radial(beta, kappa, s_max)
            }
            ("classical" | "atom" | "radial", n) => {
                self.pos = start;
                return self.err(format!("wrong number of arguments ({n}) for `{head}`"));
            }
            (w, _) => {
                self.pos = start;
                return self.err(format!("unknown weight term `{w}`"));
            }
        };
        let nu = self.check(start, nu)?;
        self.pos = after;
        Ok(nu)
    }

    fn harmonic(&mut self) -> Result<HarmonicFunction> {
        let start = self.pos;
        match self.word("harmonic function")? {
            "re" => Ok(HarmonicFunction::real_part(self.function()?)),
            "im" => Ok(HarmonicFunction::imag_part(self.function()?)),
            "const" => Ok(HarmonicFunction::constant(self.number("constant")?)),
            w => {
                self.pos = start;
                self.err(format!("unknown harmonic function `{w}` (use re, im or const)"))
            }
        }
    }
}

pub fn parse_function(src: &str) -> Result<AnalyticFunction> {
    let mut p = Parser::new(src);
    let f = p.function()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_weight(src: &str) -> Result<RieszMeasure> {
    let mut p = Parser::new(src);
    let nu = p.weight()?;
    p.finish()?;
    Ok(nu)
}

pub fn parse_harmonic(src: &str) -> Result<HarmonicFunction> {
    let mut p = Parser::new(src);
    let h = p.harmonic()?;
    p.finish()?;
    Ok(h)
}

impl FromStr for AnalyticFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_function(s)
    }
}

impl FromStr for RieszMeasure {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_weight(s)
    }
}

impl FromStr for HarmonicFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_harmonic(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("1.5"), Some(c(1.5, 0.0)));
        assert_eq!(parse_complex("-2i"), Some(c(0.0, -2.0)));
        assert_eq!(parse_complex("i"), Some(c(0.0, 1.0)));
        assert_eq!(parse_complex("-i"), Some(c(0.0, -1.0)));
        assert_eq!(parse_complex("0.3-0.4i"), Some(c(0.3, -0.4)));
        assert_eq!(parse_complex("1e-3+2e-4i"), Some(c(1e-3, 2e-4)));
        assert_eq!(parse_complex("-1e+2-i"), Some(c(-100.0, -1.0)));
        assert_eq!(parse_complex("x"), None);
        assert_eq!(parse_complex("inf"), None);
    }

    #[test]
    fn functions_parse_and_evaluate() {
        let z = c(0.3, -0.2);
        let f = parse_function("(mul affine -0.5 1 (add z const 0.5i))").unwrap();
        assert!((f.eval(z) - (z - 0.5) * (z + c(0.0, 0.5))).norm() < 1e-15);
        let g = parse_function("scale 2 (poly 1 0 1)").unwrap();
        assert!((g.eval(z) - 2.0 * (1.0 + z * z)).norm() < 1e-15);
        let h = parse_function("powr 0.5 (mobius 1 0 1 -0.5)").unwrap();
        assert!((h.eval(z) - (1.0 / (1.0 - 0.5 * z)).sqrt()).norm() < 1e-14);
    }

    #[test]
    fn weights_parse() {
        let nu = parse_weight("atom 0 1").unwrap();
        assert_eq!(nu.atoms()[0].location, c(0.0, 0.0));
        assert_eq!(nu.atoms()[0].mass, 1.0);
        let nu = parse_weight("atom 0.3 0 1 + atom -0.4i 1").unwrap();
        assert_eq!(nu.atoms()[1].location, c(0.0, -0.4));
        let nu = parse_weight("2 * radial 0.5").unwrap();
        assert_eq!(nu.radial_components()[0].kappa, 2.0);
        assert_eq!(nu.radial_components()[0].s_max, 1.0);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_weight("atom 0.5 0 1 +\nradial x") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 8)),
            other => panic!("{other:?}"),
        }
        match parse_function("(mul z bogus)") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 8)),
            other => panic!("{other:?}"),
        }
        assert!(parse_function("pow 1.5").is_err());
        assert!(parse_function("z z").is_err());
        assert!(parse_weight("atom 2 1").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "z",
            "pow 0.3",
            "(mul affine -0.5 1 affine 0.5i 1)",
            "(blaschke 1 0.5 -0.3+0.2i)",
            "scale 1-2i (poly 1 0 0.25)",
            "outer 0.5 (atom 0.5 0 1 + radial 0.5 1 1)",
        ] {
            let f = parse_function(s).unwrap();
            let back = parse_function(&f.to_string()).unwrap();
            assert_eq!(back.to_string(), f.to_string(), "{s}");
        }
    }
}
