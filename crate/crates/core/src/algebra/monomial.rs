//! Monomials in at most [`MAX_VARS`] variables under degree-reverse-lexicographic order.

use std::cmp::Ordering;
use std::fmt;

/// Upper bound on the number of variables x_0..x_n (so n <= 7).
pub const MAX_VARS: usize = 8;

/// Exponent vector with cached total degree. Unused slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    exps: [u16; MAX_VARS],
    deg: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial {
        exps: [0; MAX_VARS],
        deg: 0,
    };

    pub fn one() -> Self {
        Self::ONE
    }

    /// The variable x_i.
    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS, "variable index {i} out of range");
        let mut exps = [0; MAX_VARS];
        exps[i] = 1;
        Monomial { exps, deg: 1 }
    }

    pub fn from_exponents(e: &[u16]) -> Self {
        assert!(e.len() <= MAX_VARS, "too many variables");
        let mut exps = [0; MAX_VARS];
        exps[..e.len()].copy_from_slice(e);
        let deg = e.iter().map(|&x| x as u32).sum();
        Monomial { exps, deg }
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn exponent(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn exponents(&self) -> &[u16; MAX_VARS] {
        &self.exps
    }

    /// Highest variable index with nonzero exponent, plus one.
    pub fn support_len(&self) -> usize {
        self.exps.iter().rposition(|&e| e != 0).map_or(0, |i| i + 1)
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut exps = self.exps;
        for (a, b) in exps.iter_mut().zip(o.exps.iter()) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial {
            exps,
            deg: self.deg + o.deg,
        }
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.deg <= o.deg && self.exps.iter().zip(o.exps.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, if `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Option<Monomial> {
        if !self.divides(o) {
            return None;
        }
        let mut exps = o.exps;
        for (a, b) in exps.iter_mut().zip(self.exps.iter()) {
            *a -= *b;
        }
        Some(Monomial {
            exps,
            deg: o.deg - self.deg,
        })
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        let mut exps = self.exps;
        let mut deg = 0;
        for (a, b) in exps.iter_mut().zip(o.exps.iter()) {
            *a = (*a).max(*b);
            deg += *a as u32;
        }
        Monomial { exps, deg }
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        let mut exps = self.exps;
        let mut deg = 0;
        for (a, b) in exps.iter_mut().zip(o.exps.iter()) {
            *a = (*a).min(*b);
            deg += *a as u32;
        }
        Monomial { exps, deg }
    }

    pub fn is_coprime(&self, o: &Monomial) -> bool {
        self.exps
            .iter()
            .zip(o.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Derivative with respect to x_i: returns (exponent, monomial / x_i).
    pub fn derivative(&self, i: usize) -> Option<(u16, Monomial)> {
        let e = self.exps[i];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps;
        exps[i] -= 1;
        Some((
            e,
            Monomial {
                exps,
                deg: self.deg - 1,
            },
        ))
    }

    /// Degree-reverse-lexicographic comparison with x_0 > x_1 > ... .
    #[inline]
    pub fn grevlex(&self, o: &Monomial) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => self.revlex_tail(o),
            ord => ord,
        }
    }

    /// Reverse-lexicographic tie break for monomials of equal degree.
    #[inline]
    pub fn revlex_tail(&self, o: &Monomial) -> Ordering {
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != o.exps[i] {
                return o.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }

    /// All monomials of total degree `d` in `nvars` variables, in descending grevlex order.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut cur = [0u16; MAX_VARS];
        fn rec(i: usize, nvars: usize, left: u32, cur: &mut [u16; MAX_VARS], out: &mut Vec<Monomial>) {
            if i + 1 == nvars {
                cur[i] = left as u16;
                out.push(Monomial::from_exponents(&cur[..nvars]));
                cur[i] = 0;
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e as u16;
                rec(i + 1, nvars, left - e, cur, out);
            }
            cur[i] = 0;
        }
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial::ONE);
            }
            return out;
        }
        rec(0, nvars, d, &mut cur, &mut out);
        out.sort_by(|a, b| b.grevlex(a));
        out
    }

    pub fn fmt_with(&self, names: &[String], f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            let name = names.get(i).cloned().unwrap_or_else(|| format!("x{i}"));
            if e == 1 {
                f.write_str(&name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_char('1')?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..MAX_VARS).map(|i| format!("x{i}")).collect();
        let mut s = String::new();
        self.fmt_with(&names, &mut s)?;
        f.write_str(&s)
    }
}

/// Conventional variable names: x, y, z, w for up to four variables, x0.. otherwise.
pub fn variable_names(nvars: usize) -> Vec<String> {
    if nvars <= 4 {
        ["x", "y", "z", "w"][..nvars].iter().map(|s| s.to_string()).collect()
    } else {
        (0..nvars).map(|i| format!("x{i}")).collect()
    }
}
