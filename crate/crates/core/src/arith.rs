//! Elementary arithmetic: Möbius sieve, factorization and Dirichlet characters
//! in the Conrey labeling.
//!
//! A character mod `q` is built from its prime-power components. For odd `p`
//! the component `χ_{p^e, m}` sends `n = g^b` to `e(a·b / φ(p^e))` where
//! `m = g^a` and `g` is the least primitive root modulo `p²`. For `p = 2` the
//! group is split as `±5^b` and the usual two-generator formula applies.
//! Values are kept as exact root-of-unity exponents with a common denominator
//! `φ(q)`; the complex table is rendered once at construction.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest modulus for which character tables are built.
pub const MAX_MODULUS: u64 = 1_000_000;

/// Möbius values `μ(1..=N)`.
#[derive(Debug, Clone)]
pub struct MobiusTable {
    // mu[0] is unused and set to 0 so that mu[n] = μ(n).
    mu: Vec<i8>,
}

impl MobiusTable {
    pub fn limit(&self) -> usize {
        self.mu.len() - 1
    }

    /// `μ(n)` for `1 ≤ n ≤ limit`.
    #[inline]
    pub fn get(&self, n: usize) -> i8 {
        self.mu[n]
    }

    /// Values `μ(1), …, μ(N)`.
    pub fn values(&self) -> &[i8] {
        &self.mu[1..]
    }
}

/// Linear sieve for the Möbius function up to `n`.
pub fn mobius_sieve(n: usize) -> Result<MobiusTable> {
    if n == 0 {
        return Err(Error::InvalidArgument("mobius_sieve needs N >= 1".into()));
    }
    let mut mu = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    mu[1] = 1;
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i * p;
            if ip > n {
                break;
            }
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    Ok(MobiusTable { mu })
}

static MOBIUS_CACHE: OnceLock<RwLock<Arc<MobiusTable>>> = OnceLock::new();

/// Shared Möbius table covering at least `n`; grown geometrically on demand.
pub fn mobius_upto(n: usize) -> Arc<MobiusTable> {
    let cache = MOBIUS_CACHE.get_or_init(|| RwLock::new(Arc::new(mobius_sieve(1 << 16).expect("nonzero sieve size"))));
    {
        let table = cache.read().unwrap_or_else(|e| e.into_inner());
        if table.limit() >= n {
            return Arc::clone(&table);
        }
    }
    let mut guard = cache.write().unwrap_or_else(|e| e.into_inner());
    if guard.limit() < n {
        let size = n.max(2 * guard.limit());
        *guard = Arc::new(mobius_sieve(size).expect("nonzero sieve size"));
    }
    Arc::clone(&guard)
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Prime factorization by trial division, as `(p, e)` pairs in increasing `p`.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `μ(n)` from the factorization of `n`.
pub fn mobius(n: u64) -> i8 {
    if n == 0 {
        return 0;
    }
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).into_iter().fold(n, |acc, (p, _)| acc / p * (p - 1))
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1u64 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % modulus as u128) as u64;
        }
        base = (base as u128 * base as u128 % modulus as u128) as u64;
        exp >>= 1;
    }
    acc
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r == 1).then(|| old_s.rem_euclid(m as i128) as u64)
}

/// Least primitive root modulo `p²` for an odd prime `p`; it generates
/// `(Z/p^e Z)*` for every `e`.
fn conrey_generator(p: u64) -> u64 {
    let phi = p - 1;
    let prime_divisors: Vec<u64> = factorize(phi).into_iter().map(|(r, _)| r).collect();
    let p2 = p * p;
    (2..p)
        .find(|&g| prime_divisors.iter().all(|&r| pow_mod(g, phi / r, p) != 1) && pow_mod(g, phi, p2) != 1)
        .expect("every odd prime has a primitive root")
}

/// `e(num/den) = exp(2πi·num/den)`, exact on quarter turns.
pub fn root_of_unity(num: u64, den: u64) -> Complex64 {
    let num = num % den;
    if (4 * num) % den == 0 {
        return match 4 * num / den {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (2.0 * PI * num as f64 / den as f64).sin_cos();
    Complex64::new(c, s)
}

/// Discrete-log data of one prime-power factor of the modulus.
#[derive(Debug, Clone)]
struct Component {
    p: u64,
    e: u32,
    pe: u64,
    phi: u64,
    // For odd p: log[n] = Some(b) with n ≡ g^b. For p = 2: log[n] = Some(a·2^(e-2)·... ) is
    // not meaningful, so the 2-adic part stores (sign bit, 5-exponent) instead.
    log: Vec<Option<(u64, u64)>>,
}

impl Component {
    fn new(p: u64, e: u32) -> Self {
        let pe = p.pow(e);
        let phi = pe / p * (p - 1);
        let mut log = vec![None; pe as usize];
        if p == 2 {
            match e {
                1 => log[1] = Some((0, 0)),
                2 => {
                    log[1] = Some((0, 0));
                    log[3] = Some((1, 0));
                }
                _ => {
                    let order = pe / 4;
                    let mut v = 1u64;
                    for b in 0..order {
                        log[v as usize] = Some((0, b));
                        log[(pe - v) as usize] = Some((1, b));
                        v = v * 5 % pe;
                    }
                }
            }
        } else {
            let g = conrey_generator(p);
            let mut v = 1u64;
            for b in 0..phi {
                log[v as usize] = Some((0, b));
                v = v * g % pe;
            }
        }
        Component { p, e, pe, phi, log }
    }

    /// Exponent numerator over `phi` of `χ_{p^e, m}(n)`, or `None` if `p | n`.
    fn exponent(&self, m: u64, n: u64) -> Option<u64> {
        let (sm, bm) = self.log[(m % self.pe) as usize]?;
        let (sn, bn) = self.log[(n % self.pe) as usize]?;
        if self.p == 2 {
            // e(sm·sn/2 + bm·bn/2^(e-2)) over the denominator phi = 2^(e-1).
            let half = self.phi / 2;
            let five_part = if self.e >= 3 { (bm * bn % (self.pe / 4)) * 2 } else { 0 };
            Some((sm * sn * half + five_part) % self.phi)
        } else {
            Some((bm as u128 * bn as u128 % self.phi as u128) as u64)
        }
    }

    /// Conductor exponent of `χ_{p^e, m}`: least `j` with the character
    /// trivial on `n ≡ 1 (mod p^j)`.
    fn conductor_exponent(&self, m: u64) -> u32 {
        for j in 0..=self.e {
            let step = self.p.pow(j);
            let trivial = (0..self.pe / step)
                .map(|t| 1 + t * step)
                .filter(|n| n % self.p != 0)
                .all(|n| self.exponent(m, n) == Some(0));
            if trivial {
                return j;
            }
        }
        self.e
    }
}

/// The character group modulo `q`, with the discrete-log tables shared by all
/// of its characters.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    modulus: u64,
    phi: u64,
    components: Vec<Component>,
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        if q > MAX_MODULUS {
            return Err(Error::Resource(format!(
                "character tables are limited to q <= {MAX_MODULUS}"
            )));
        }
        let components = factorize(q).into_iter().map(|(p, e)| Component::new(p, e)).collect();
        Ok(CharacterGroup {
            modulus: q,
            phi: euler_phi(q),
            components,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The character with Conrey index `m`.
    pub fn character(&self, m: u64) -> Result<DirichletCharacter> {
        let q = self.modulus;
        let m = m % q;
        if gcd(m, q) != 1 {
            return Err(Error::InvalidArgument(format!(
                "Conrey index {m} is not coprime to {q}"
            )));
        }
        let den = self.phi;
        let exponents: Vec<Option<u64>> = (0..q)
            .map(|n| {
                let mut total = 0u64;
                for c in &self.components {
                    let num = c.exponent(m, n)?;
                    total = (total + num * (den / c.phi)) % den;
                }
                Some(total)
            })
            .collect();
        let values = exponents
            .iter()
            .map(|ex| ex.map_or(Complex64::new(0.0, 0.0), |num| root_of_unity(num, den)))
            .collect();
        let conductor = self
            .components
            .iter()
            .map(|c| c.p.pow(c.conductor_exponent(m)))
            .product::<u64>();
        // χ(-1): q - 1 ≡ -1; for q = 1 the only residue is 0 and χ(0) = 1.
        let minus_one = exponents[((q + q - 1) % q) as usize].unwrap_or(0);
        let parity = if minus_one == 0 { 0 } else { 1 };
        Ok(DirichletCharacter {
            modulus: q,
            conrey_index: if q == 1 { 1 } else { m },
            denominator: den,
            exponents,
            values,
            parity,
            conductor,
        })
    }

    /// All `φ(q)` characters, ordered by Conrey index.
    pub fn characters(&self) -> Vec<DirichletCharacter> {
        let q = self.modulus;
        if q == 1 {
            return vec![self.character(1).expect("trivial character")];
        }
        (1..q)
            .filter(|&m| gcd(m, q) == 1)
            .map(|m| self.character(m).expect("index is coprime"))
            .collect()
    }
}

/// A Dirichlet character modulo `q` in the Conrey labeling. Immutable.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    conrey_index: u64,
    denominator: u64,
    exponents: Vec<Option<u64>>,
    values: Vec<Complex64>,
    parity: u8,
    conductor: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.conrey_index == other.conrey_index
    }
}

impl DirichletCharacter {
    /// `χ_{q, m}`.
    pub fn from_conrey(q: u64, m: u64) -> Result<Self> {
        CharacterGroup::new(q)?.character(m)
    }

    /// The character modulo 1 (every value 1); its L-function is ζ(s).
    pub fn trivial() -> Self {
        Self::from_conrey(1, 1).expect("modulus 1")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn conrey_index(&self) -> u64 {
        self.conrey_index
    }

    /// `a ∈ {0, 1}` with `χ(-1) = (-1)^a`.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.conrey_index % self.modulus == 1 % self.modulus
    }

    pub fn is_real(&self) -> bool {
        self.exponents
            .iter()
            .flatten()
            .all(|&num| (2 * num) % self.denominator == 0)
    }

    /// Rendered value table indexed by residue `0..q`.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Exact value as `Some((num, den))` meaning `e(num/den)`, or `None` when
    /// `gcd(n, q) > 1`.
    pub fn exponent(&self, n: i64) -> Option<(u64, u64)> {
        let r = n.rem_euclid(self.modulus as i64) as usize;
        self.exponents[r].map(|num| (num, self.denominator))
    }

    #[inline]
    pub fn value(&self, n: i64) -> Complex64 {
        self.values[n.rem_euclid(self.modulus as i64) as usize]
    }

    #[inline]
    pub fn value_u(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    /// Order of the character in the dual group.
    pub fn order(&self) -> u64 {
        let g = self
            .exponents
            .iter()
            .flatten()
            .fold(self.denominator, |g, &num| gcd(g, num));
        self.denominator / g
    }

    /// The complex-conjugate character `χ̄ = χ_{q, m⁻¹}`.
    pub fn conjugate(&self) -> Self {
        if self.modulus == 1 {
            return self.clone();
        }
        let inv = mod_inverse(self.conrey_index, self.modulus).expect("index is a unit");
        Self::from_conrey(self.modulus, inv).expect("inverse is a unit")
    }

    /// `G(χ) = Σ_{n=1}^{q} χ(n) e(n/q)` by direct summation.
    pub fn gauss_sum(&self) -> Complex64 {
        let q = self.modulus;
        (1..=q)
            .filter_map(|n| {
                let (num, den) = self.exponent(n as i64)?;
                // e(num/den + n/q) with a common denominator.
                let l = den / gcd(den, q) * q;
                Some(root_of_unity((num * (l / den) + n * (l / q)) % l, l))
            })
            .sum()
    }

    /// Root number `ε(χ) = G(χ) / (i^a √q)`; only for primitive characters.
    pub fn epsilon_factor(&self) -> Result<Complex64> {
        if !self.is_primitive() {
            return Err(Error::Domain(format!(
                "root number needs a primitive character; chi_{}({}, ·) has conductor {}",
                self.modulus, self.conrey_index, self.conductor
            )));
        }
        let i_pow_a = if self.parity == 1 {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(1.0, 0.0)
        };
        Ok(self.gauss_sum() / (i_pow_a * (self.modulus as f64).sqrt()))
    }

    /// `(q, conrey_index)` label.
    pub fn label(&self) -> (u64, u64) {
        (self.modulus, self.conrey_index)
    }
}

/// All characters modulo `q`.
pub fn characters_mod(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(q)?.characters())
}

/// Free-function form of [`DirichletCharacter::gauss_sum`].
pub fn gauss_sum(chi: &DirichletCharacter) -> Complex64 {
    chi.gauss_sum()
}

/// Free-function form of [`DirichletCharacter::epsilon_factor`].
pub fn epsilon_factor(chi: &DirichletCharacter) -> Result<Complex64> {
    chi.epsilon_factor()
}
