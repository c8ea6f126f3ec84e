//! Small fixed-size vector algebra for E³ and E⁴.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Residual norm below which a seed vector is considered already spanned.
pub const SEED_SKIP_NORM: f64 = 1e-8;

/// Normalized Gram determinant below which a basis is rejected.
pub const DEGENERACY_TOL: f64 = 1e-12;

macro_rules! impl_vector {
    ($name:ident, $n:expr) => {
        impl $name {
            pub const ZERO: Self = Self([0.0; $n]);

            pub fn dot(self, other: Self) -> f64 {
                let mut acc = 0.0;
                for i in 0..$n {
                    acc += self.0[i] * other.0[i];
                }
                acc
            }

            pub fn norm_squared(self) -> f64 {
                self.dot(self)
            }

            pub fn norm(self) -> f64 {
                self.norm_squared().sqrt()
            }

            /// Unit vector in the same direction; the zero vector maps to itself.
            pub fn normalized(self) -> Self {
                let n = self.norm();
                if n == 0.0 {
                    self
                } else {
                    self / n
                }
            }

            pub fn is_finite(self) -> bool {
                self.0.iter().all(|c| c.is_finite())
            }

            pub fn as_array(&self) -> &[f64; $n] {
                &self.0
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    self.0[i] += rhs.0[i];
                }
                self
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: Self) {
                for i in 0..$n {
                    self.0[i] += rhs.0[i];
                }
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(mut self, rhs: Self) -> Self {
                for i in 0..$n {
                    self.0[i] -= rhs.0[i];
                }
                self
            }
        }

        impl Neg for $name {
            type Output = Self;
            fn neg(mut self) -> Self {
                for c in self.0.iter_mut() {
                    *c = -*c;
                }
                self
            }
        }

        impl Mul<f64> for $name {
            type Output = Self;
            fn mul(mut self, s: f64) -> Self {
                for c in self.0.iter_mut() {
                    *c *= s;
                }
                self
            }
        }

        impl Mul<$name> for f64 {
            type Output = $name;
            fn mul(self, v: $name) -> $name {
                v * self
            }
        }

        impl Div<f64> for $name {
            type Output = Self;
            fn div(self, s: f64) -> Self {
                self * (1.0 / s)
            }
        }

        impl Index<usize> for $name {
            type Output = f64;
            fn index(&self, i: usize) -> &f64 {
                &self.0[i]
            }
        }

        impl std::iter::Sum for $name {
            fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
                iter.fold(Self::ZERO, |a, b| a + b)
            }
        }
    };
}

/// A point or direction in E³.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec3(pub [f64; 3]);

/// A point or direction in E⁴.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vec4(pub [f64; 4]);

impl_vector!(Vec3, 3);
impl_vector!(Vec4, 4);

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self([x, y, z])
    }

    pub fn x(self) -> f64 {
        self.0[0]
    }

    pub fn y(self) -> f64 {
        self.0[1]
    }

    pub fn z(self) -> f64 {
        self.0[2]
    }

    /// Right-handed cross product.
    pub fn cross(self, b: Self) -> Self {
        let a = self.0;
        let b = b.0;
        Self([
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }

    /// Embeds into E⁴ as span{e₁, e₂, e₃}.
    pub fn lift(self) -> Vec4 {
        Vec4([self.0[0], self.0[1], self.0[2], 0.0])
    }
}

impl Vec4 {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self([x1, x2, x3, x4])
    }

    /// The canonical basis vector eᵢ, `i` in 1..=4.
    pub fn basis(i: usize) -> Self {
        assert!((1..=4).contains(&i), "basis index out of range");
        let mut c = [0.0; 4];
        c[i - 1] = 1.0;
        Self(c)
    }

    pub fn e4() -> Self {
        Self::basis(4)
    }

    /// Drops coordinate `index` (1-based), projecting to E³.
    pub fn drop_coordinate(self, index: usize) -> Vec3 {
        assert!((1..=4).contains(&index), "coordinate index out of range");
        let mut out = [0.0; 3];
        let mut k = 0;
        for (i, c) in self.0.iter().enumerate() {
            if i + 1 != index {
                out[k] = *c;
                k += 1;
            }
        }
        Vec3(out)
    }
}

pub fn dot3(a: Vec3, b: Vec3) -> f64 {
    a.dot(b)
}

pub fn dot4(a: Vec4, b: Vec4) -> f64 {
    a.dot(b)
}

pub fn cross3(a: Vec3, b: Vec3) -> Vec3 {
    a.cross(b)
}

/// Determinant of the Gram matrix of `vs`, normalized by the product of
/// squared lengths so that it lies in [0, 1].
fn normalized_gram_determinant(vs: &[Vec4]) -> f64 {
    let n = vs.len();
    let mut m = [[0.0; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            let scale = (vs[i].norm_squared() * vs[j].norm_squared()).sqrt();
            m[i][j] = if scale == 0.0 {
                0.0
            } else {
                vs[i].dot(vs[j]) / scale
            };
        }
    }
    // Gaussian elimination with partial pivoting on the n×n block.
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (x, p) in m[row].iter_mut().zip(pivot_row).skip(col) {
                *x -= factor * p;
            }
        }
    }
    det
}

fn reject(v: Vec4, against: &[Vec4]) -> Vec4 {
    // Two passes of modified Gram–Schmidt keep the residual orthogonal to
    // working precision.
    let mut r = v;
    for _ in 0..2 {
        for q in against {
            r = r - *q * r.dot(*q);
        }
    }
    r
}

/// Completes `basis` to an orthonormal frame of E⁴ and returns the
/// `4 - basis.len()` completing unit vectors.
///
/// Seeds are tried in order; a seed whose residual after projection has norm
/// below [`SEED_SKIP_NORM`] is skipped.
pub fn gram_schmidt(basis: &[Vec4], seeds: &[Vec4]) -> Result<Vec<Vec4>> {
    if basis.len() > 4 {
        return Err(Error::InvalidParameter(format!(
            "basis of {} vectors in E⁴",
            basis.len()
        )));
    }
    if !basis.is_empty() {
        let gram = normalized_gram_determinant(basis);
        if !(gram >= DEGENERACY_TOL) {
            return Err(Error::DegenerateBasis { gram });
        }
    }
    let mut ortho: Vec<Vec4> = Vec::with_capacity(4);
    for b in basis {
        let q = reject(*b, &ortho);
        ortho.push(q.normalized());
    }
    let needed = 4 - basis.len();
    let mut out = Vec::with_capacity(needed);
    for seed in seeds {
        if out.len() == needed {
            break;
        }
        let r = reject(*seed, &ortho);
        if r.norm() < SEED_SKIP_NORM {
            continue;
        }
        let q = r.normalized();
        ortho.push(q);
        out.push(q);
    }
    if out.len() < needed {
        return Err(Error::SeedsExhausted);
    }
    Ok(out)
}

/// The canonical seeds e₁..e₄ in index order.
pub fn canonical_seeds() -> [Vec4; 4] {
    [
        Vec4::basis(1),
        Vec4::basis(2),
        Vec4::basis(3),
        Vec4::basis(4),
    ]
}
