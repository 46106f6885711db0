//! Displayed matrices of the derivation, written as rows separated by `;`
//! and entries separated by `,`, in [`HermitianBasis`] order
//! `E11 E22 E33 S12 S13 S23 H12 H13 H23`.
//!
//! [`HermitianBasis`]: crate::maps::basis::HermitianBasis

/// Forced by the zero diagonal entries of `Φ(E_kk)`.
pub(crate) const PHI1_E: [&str; 3] = [
    "lam, a1*i, 0; -a1*i, lam, 0; 0, 0, 0",
    "0, 0, 0; 0, lam, a2*i; 0, -a2*i, lam",
    "lam, 0, a3*i; 0, 0, 0; -a3*i, 0, lam",
];

pub(crate) const PHI2_E: [&str; 3] = [
    "1-lam, -a1*i, 0; a1*i, 1-lam, 0; 0, 0, 0",
    "0, 0, 0; 0, 1-lam, -a2*i; 0, a2*i, 1-lam",
    "1-lam, 0, -a3*i; 0, 0, 0; a3*i, 0, 1-lam",
];

pub(crate) const PHI1_S: [&str; 3] = [
    "0, -lam+b1*i, b2*i; -lam-b1*i, 0, b3*i; -b2*i, -b3*i, 0",
    "0, b4*i, -lam+b5*i; -b4*i, 0, b6*i; -lam-b5*i, -b6*i, 0",
    "0, b7*i, b8*i; -b7*i, 0, -lam+b9*i; -b8*i, -lam-b9*i, 0",
];

pub(crate) const PHI2_S: [&str; 3] = [
    "0, -1+lam-b1*i, -b2*i; -1+lam+b1*i, 0, -b3*i; b2*i, b3*i, 0",
    "0, -b4*i, -1+lam-b5*i; b4*i, 0, -b6*i; -1+lam+b5*i, b6*i, 0",
    "0, -b7*i, -b8*i; b7*i, 0, -1+lam-b9*i; b8*i, -1+lam+b9*i, 0",
];

/// General hermitian images of `H_kl`, one real diagonal and three complex
/// off-diagonal unknowns each.
pub(crate) const PHI1_H: [&str; 3] = [
    "c1, alpha1, alpha2; conj(alpha1), c2, alpha3; conj(alpha2), conj(alpha3), c3",
    "c4, alpha4, alpha5; conj(alpha4), c5, alpha6; conj(alpha5), conj(alpha6), c6",
    "c7, alpha7, alpha8; conj(alpha7), c8, alpha9; conj(alpha8), conj(alpha9), c9",
];

pub(crate) const PHI2_H: [&str; 3] = [
    "-c1, -i-alpha1, -alpha2; i-conj(alpha1), -c2, -alpha3; -conj(alpha2), -conj(alpha3), -c3",
    "-c4, -alpha4, -i-alpha5; -conj(alpha4), -c5, -alpha6; i-conj(alpha5), -conj(alpha6), -c6",
    "-c7, -alpha7, -alpha8; -conj(alpha7), -c8, -i-alpha9; -conj(alpha8), i-conj(alpha9), -c9",
];

/// `H_kl` images once every constant but `α, β, γ` is tied to `a_k`.
pub(crate) const PHI1_H_FINAL: [&str; 3] = [
    "0, -lam*i, a2; lam*i, -2*a1, alpha; a2, conj(alpha), 0",
    "-2*a3, beta, -lam*i; conj(beta), 0, -a1; lam*i, -a1, 0",
    "0, -a3, gamma; -a3, 0, -lam*i; conj(gamma), lam*i, -2*a2",
];

pub(crate) const PHI2_H_FINAL: [&str; 3] = [
    "0, (lam-1)*i, -a2; (1-lam)*i, 2*a1, -alpha; -a2, -conj(alpha), 0",
    "2*a3, -beta, (lam-1)*i; -conj(beta), 0, a1; (1-lam)*i, a1, 0",
    "0, a3, -gamma; a3, 0, (lam-1)*i; -conj(gamma), (1-lam)*i, 2*a2",
];

/// `b_k` in terms of `a_k`.
pub(crate) const CORRELATIONS: [(&str, &str); 9] = [
    ("b1", "0"),
    ("b2", "-a2"),
    ("b3", "-a3"),
    ("b4", "a2"),
    ("b5", "0"),
    ("b6", "a1"),
    ("b7", "-a3"),
    ("b8", "-a1"),
    ("b9", "0"),
];

/// Entries `[φ₁(X)]_kl` in row-major order over a general `X = (x_kl)`.
pub(crate) const PHI1_ENTRIES: [&str; 9] = [
    "(x11+x33)*lam + a3*(x13-x31)*i",
    "-x12*lam + a1*x11*i - a3*x32*i + 1/2*(a2-beta)*x13*i + 1/2*(a2+beta)*x31*i",
    "-x13*lam + a3*x33*i - a2*x12*i - 1/2*(a1+gamma)*x23*i - 1/2*(a1-gamma)*x32*i",
    "-x21*lam - a1*x11*i + a3*x23*i - 1/2*(a2-conj(beta))*x31*i - 1/2*(a2+conj(beta))*x13*i",
    "(x22+x11)*lam + a1*(x12-x21)*i",
    "-x23*lam + a1*x13*i + a2*x22*i - 1/2*(a3+alpha)*x12*i - 1/2*(a3-alpha)*x21*i",
    "-x31*lam - a3*x33*i + a2*x21*i + 1/2*(a1+conj(gamma))*x32*i + 1/2*(a1-conj(gamma))*x23*i",
    "-x32*lam - a1*x31*i - a2*x22*i + 1/2*(a3+conj(alpha))*x21*i + 1/2*(a3-conj(alpha))*x12*i",
    "(x33+x22)*lam + a2*(x23-x32)*i",
];

pub(crate) const PHI2_ENTRIES: [&str; 9] = [
    "(x11+x33)*(1-lam) - a3*(x13-x31)*i",
    "-x12*(1-lam) - a1*x11*i + a3*x32*i - 1/2*(a2-beta)*x13*i - 1/2*(a2+beta)*x31*i",
    "-x13*(1-lam) - a3*x33*i + a2*x12*i + 1/2*(a1+gamma)*x23*i + 1/2*(a1-gamma)*x32*i",
    "-x21*(1-lam) + a1*x11*i - a3*x23*i + 1/2*(a2-conj(beta))*x31*i + 1/2*(a2+conj(beta))*x13*i",
    "(x22+x11)*(1-lam) - a1*(x12-x21)*i",
    "-x23*(1-lam) - a1*x13*i - a2*x22*i + 1/2*(a3+alpha)*x12*i + 1/2*(a3-alpha)*x21*i",
    "-x31*(1-lam) + a3*x33*i - a2*x21*i - 1/2*(a1+conj(gamma))*x32*i - 1/2*(a1-conj(gamma))*x23*i",
    "-x32*(1-lam) + a1*x31*i + a2*x22*i - 1/2*(a3+conj(alpha))*x21*i - 1/2*(a3-conj(alpha))*x12*i",
    "(x33+x22)*(1-lam) - a2*(x23-x32)*i",
];
