//! Small exact linear algebra shared across modules: square integer
//! matrices, rational vectors with readable serde, and exact rank over Q.

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use thiserror::Error;

pub type Rat = Rational64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(i128),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,
}

/// Square integer matrix, row-major. Sizes stay tiny (n <= 4 for atlases,
/// n = 3 for wall matrices), so products go through i128 and fail loudly on
/// overflow instead of wrapping.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct IntMat {
    n: usize,
    a: Vec<i64>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMat{:?}", self.rows())
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMat {
    type Error = String;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, String> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(format!("expected a square matrix, got {rows:?}"));
        }
        Ok(IntMat {
            n,
            a: rows.into_iter().flatten().collect(),
        })
    }
}

impl From<IntMat> for Vec<Vec<i64>> {
    fn from(m: IntMat) -> Self {
        m.rows()
    }
}

impl IntMat {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        IntMat::try_from(rows.to_vec()).map_err(LinalgError::DimensionMismatch)
    }

    pub fn identity(n: usize) -> Self {
        let mut a = vec![0; n * n];
        for i in 0..n {
            a[i * n + i] = 1;
        }
        IntMat { n, a }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.a.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        let mut out = IntMat {
            n,
            a: vec![0; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                out.a[j * n + i] = self.a[i * n + j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.n != other.n {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} vs {}",
                self.n, other.n
            )));
        }
        let n = self.n;
        let mut out = IntMat {
            n,
            a: vec![0; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let mut acc: i128 = 0;
                for k in 0..n {
                    acc += self.a[i * n + k] as i128 * other.a[k * n + j] as i128;
                }
                out.a[i * n + j] = i64::try_from(acc).map_err(|_| LinalgError::Overflow)?;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[i64]) -> Result<Vec<i64>, LinalgError> {
        if v.len() != self.n {
            return Err(LinalgError::DimensionMismatch(format!(
                "{} vs {}",
                self.n,
                v.len()
            )));
        }
        let mut out = vec![0i64; self.n];
        for i in 0..self.n {
            let mut acc: i128 = 0;
            for k in 0..self.n {
                acc += self.a[i * self.n + k] as i128 * v[k] as i128;
            }
            out[i] = i64::try_from(acc).map_err(|_| LinalgError::Overflow)?;
        }
        Ok(out)
    }

    /// Exact determinant (fraction-free Bareiss over i128).
    pub fn det(&self) -> i128 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<i128> = self.a.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if m[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&r| m[r * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    m.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i * n + j] =
                        (m[i * n + j] * m[k * n + k] - m[i * n + k] * m[k * n + j]) / prev;
                }
                m[i * n + k] = 0;
            }
            prev = m[k * n + k];
        }
        sign * m[n * n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs() == 1
    }

    /// Inverse of a matrix with det = +/-1 (adjugate construction, exact).
    pub fn inverse_unimodular(&self) -> Result<Self, LinalgError> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(LinalgError::NotUnimodular(d));
        }
        let n = self.n;
        let mut out = IntMat {
            n,
            a: vec![0; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(j, i);
                let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
                let val = sign as i128 * minor * d; // divide by det = multiply by det when |det|=1
                out.a[i * n + j] = i64::try_from(val).map_err(|_| LinalgError::Overflow)?;
            }
        }
        Ok(out)
    }

    fn minor(&self, row: usize, col: usize) -> i128 {
        let n = self.n;
        let rows: Vec<Vec<i64>> = (0..n)
            .filter(|&i| i != row)
            .map(|i| {
                (0..n)
                    .filter(|&j| j != col)
                    .map(|j| self.a[i * n + j])
                    .collect()
            })
            .collect();
        if rows.is_empty() {
            return 1;
        }
        IntMat {
            n: n - 1,
            a: rows.into_iter().flatten().collect(),
        }
        .det()
    }
}

/// gcd of a slice, nonnegative; 0 for the zero vector.
pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x.abs()))
}

/// Divide an integer vector by the gcd of its entries. Zero vectors are
/// returned unchanged.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|&x| x / g).collect()
    }
}

/// Exact rank over Q of a rectangular matrix with Rational64 entries.
/// Plain Gaussian elimination with exact pivoting; the matrices here are
/// incidence-sized, so i64 rationals with overflow-checked ops suffice.
pub fn rank_rational(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let pivot = m[row][col];
        for j in col..ncols {
            m[row][j] /= pivot;
        }
        for r in 0..nrows {
            if r != row && !m[r][col].is_zero() {
                let factor = m[r][col];
                for j in col..ncols {
                    let sub = m[row][j] * factor;
                    m[r][j] -= sub;
                }
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let num: i64 = p.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
        let den: i64 = q.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
        if den == 0 {
            return Err("zero denominator".into());
        }
        Ok(Rat::new(num, den))
    } else {
        let num: i64 = s.parse().map_err(|e| format!("bad rational: {e}"))?;
        Ok(Rat::from_integer(num))
    }
}

/// serde adaptor for a bare `Rat` field, using the "p/q" string form.
pub mod serde_rat {
    use super::{JsonRat, Rat};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
        JsonRat(*r).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        Ok(JsonRat::deserialize(d)?.0)
    }
}

/// Rational number serialized as "p/q" (or plain "p" for integers).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JsonRat(pub Rat);

impl Serialize for JsonRat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(&self.0))
    }
}

impl<'de> Deserialize<'de> for JsonRat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(JsonRat(Rat::from_integer(n))),
            Raw::Str(s) => parse_rat(&s).map(JsonRat).map_err(serde::de::Error::custom),
        }
    }
}

/// Planar point or vector with rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(JsonRat, JsonRat)", into = "(JsonRat, JsonRat)")]
pub struct Vec2r {
    pub x: Rat,
    pub y: Rat,
}

impl fmt::Debug for Vec2r {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", format_rat(&self.x), format_rat(&self.y))
    }
}

impl From<(JsonRat, JsonRat)> for Vec2r {
    fn from(v: (JsonRat, JsonRat)) -> Self {
        Vec2r { x: v.0 .0, y: v.1 .0 }
    }
}

impl From<Vec2r> for (JsonRat, JsonRat) {
    fn from(v: Vec2r) -> Self {
        (JsonRat(v.x), JsonRat(v.y))
    }
}

impl Vec2r {
    pub fn new(x: Rat, y: Rat) -> Self {
        Vec2r { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        Vec2r {
            x: Rat::from_integer(x),
            y: Rat::from_integer(y),
        }
    }

    pub fn add(&self, o: &Vec2r) -> Vec2r {
        Vec2r::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(&self, o: &Vec2r) -> Vec2r {
        Vec2r::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(&self, t: Rat) -> Vec2r {
        Vec2r::new(self.x * t, self.y * t)
    }

    pub fn cross(&self, o: &Vec2r) -> Rat {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(&self, o: &Vec2r) -> Rat {
        self.x * o.x + self.y * o.y
    }

    pub fn is_lattice(&self) -> bool {
        self.x.denom().is_one() && self.y.denom().is_one()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (rat_to_f64(self.x), rat_to_f64(self.y))
    }
}

/// Spatial point or vector with rational coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "(JsonRat, JsonRat, JsonRat)", into = "(JsonRat, JsonRat, JsonRat)")]
pub struct Vec3r {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl fmt::Debug for Vec3r {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            format_rat(&self.x),
            format_rat(&self.y),
            format_rat(&self.z)
        )
    }
}

impl From<(JsonRat, JsonRat, JsonRat)> for Vec3r {
    fn from(v: (JsonRat, JsonRat, JsonRat)) -> Self {
        Vec3r {
            x: v.0 .0,
            y: v.1 .0,
            z: v.2 .0,
        }
    }
}

impl From<Vec3r> for (JsonRat, JsonRat, JsonRat) {
    fn from(v: Vec3r) -> Self {
        (JsonRat(v.x), JsonRat(v.y), JsonRat(v.z))
    }
}

impl Vec3r {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Vec3r { x, y, z }
    }

    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Vec3r::new(
            Rat::from_integer(x),
            Rat::from_integer(y),
            Rat::from_integer(z),
        )
    }

    pub fn add(&self, o: &Vec3r) -> Vec3r {
        Vec3r::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }

    pub fn sub(&self, o: &Vec3r) -> Vec3r {
        Vec3r::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }

    pub fn scale(&self, t: Rat) -> Vec3r {
        Vec3r::new(self.x * t, self.y * t, self.z * t)
    }

    pub fn dot(&self, o: &Vec3r) -> Rat {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(&self, o: &Vec3r) -> Vec3r {
        Vec3r::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero() && self.z.is_zero()
    }

    /// Clear denominators and divide by the gcd; keeps orientation.
    pub fn primitive_direction(&self) -> Option<[i64; 3]> {
        if self.is_zero() {
            return None;
        }
        let lcm = [self.x, self.y, self.z]
            .iter()
            .fold(1i64, |l, r| num_integer::lcm(l, *r.denom()));
        let ints = [
            (self.x * Rat::from_integer(lcm)).to_integer(),
            (self.y * Rat::from_integer(lcm)).to_integer(),
            (self.z * Rat::from_integer(lcm)).to_integer(),
        ];
        let p = primitive(&ints);
        Some([p[0], p[1], p[2]])
    }
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_and_inverse() {
        let m = IntMat::from_rows(&[vec![2, -1, 0], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(m.det(), 1);
        let inv = m.inverse_unimodular().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), IntMat::identity(3));
        assert_eq!(inv.mul(&m).unwrap(), IntMat::identity(3));
    }

    #[test]
    fn non_unimodular_rejected() {
        let m = IntMat::from_rows(&[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(m.inverse_unimodular(), Err(LinalgError::NotUnimodular(4)));
    }

    #[test]
    fn rank_of_incidence_matrix() {
        let one = Rat::from_integer(1);
        let zero = Rat::from_integer(0);
        // coboundary of a path with 3 vertices, 2 edges: rank 2
        let rows = vec![vec![-one, one, zero], vec![zero, -one, one]];
        assert_eq!(rank_rational(&rows), 2);
    }

    #[test]
    fn rational_serde_round_trip() {
        let v = Vec2r::new(Rat::new(3, 2), Rat::from_integer(-4));
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["3/2","-4"]"#);
        let back: Vec2r = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }

    #[test]
    fn primitive_direction_clears_denominators() {
        let v = Vec3r::new(Rat::new(1, 2), Rat::new(1, 2), Rat::from_integer(0));
        assert_eq!(v.primitive_direction(), Some([1, 1, 0]));
    }
}
