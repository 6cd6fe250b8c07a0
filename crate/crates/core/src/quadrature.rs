//! Adaptive Gauss–Legendre quadrature with a Kronrod error estimate.

use crate::scalar::{real, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Cap on accepted plus pending subintervals.
const MAX_PIECES: usize = 4096;

/// Integral of `f` over `[a, b]` and an absolute error estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
}

fn gk15<T: Real>(f: &impl Fn(T) -> T, a: T, b: T) -> (T, T) {
    let two = T::one() + T::one();
    let c = (a + b) / two;
    let h = (b - a) / two;
    let fc = f(c);
    let mut kron = fc * real(WGK[7]);
    let mut gauss = fc * real(WG[3]);
    for j in 0..7 {
        let dx = h * real(XGK[j]);
        let s = f(c - dx) + f(c + dx);
        kron = kron + s * real(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * real(WG[j / 2]);
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Adaptive bisection until the summed error estimate meets `tol` (absolute).
pub fn integrate<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T) -> Quadrature<T> {
    let mut stack = vec![(a, b, tol)];
    let mut pieces = 1;
    let mut value = T::zero();
    let mut error = T::zero();
    let two = T::one() + T::one();
    while let Some((lo, hi, local_tol)) = stack.pop() {
        let (v, e) = gk15(&f, lo, hi);
        let tiny = !(hi - lo > T::epsilon() * (lo.abs() + hi.abs()));
        if e <= local_tol || !e.is_finite() || pieces >= MAX_PIECES || tiny {
            value = value + v;
            error = error + e;
        } else {
            let mid = (lo + hi) / two;
            pieces += 1;
            stack.push((mid, hi, local_tol / two));
            stack.push((lo, mid, local_tol / two));
        }
    }
    Quadrature { value, error }
}
