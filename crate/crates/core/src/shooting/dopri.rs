//! Dormand–Prince 5(4) stepper with the standard fourth-order continuous
//! extension (Hairer & Wanner's `dopri5` dense output).

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum StepError {
    Underflow { r: f64, h: f64 },
    NonFinite { r: f64 },
}

/// One accepted step with its interpolant.
#[derive(Debug, Clone)]
pub(crate) struct DenseStep<const N: usize> {
    pub r0: f64,
    pub h: f64,
    pub y1: [f64; N],
    rcont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    pub fn r1(&self) -> f64 {
        self.r0 + self.h
    }

    pub fn at(&self, r: f64) -> [f64; N] {
        let theta = (r - self.r0) / self.h;
        let theta1 = 1.0 - theta;
        let c = &self.rcont;
        std::array::from_fn(|i| {
            c[0][i] + theta * (c[1][i] + theta1 * (c[2][i] + theta * (c[3][i] + theta1 * c[4][i])))
        })
    }
}

pub(crate) struct Stepper<const N: usize, F> {
    rhs: F,
    pub r: f64,
    pub y: [f64; N],
    k1: [f64; N],
    pub h: f64,
    rtol: f64,
    atol: f64,
    pub steps: usize,
    pub rejected: usize,
}

fn axpy<const N: usize>(y: &[f64; N], h: f64, terms: &[(f64, &[f64; N])]) -> [f64; N] {
    std::array::from_fn(|i| y[i] + h * terms.iter().map(|(a, k)| a * k[i]).sum::<f64>())
}

impl<const N: usize, F> Stepper<N, F>
where
    F: Fn(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(rhs: F, r: f64, y: [f64; N], h: f64, rtol: f64, atol: f64) -> Self {
        let k1 = rhs(r, &y);
        Self {
            rhs,
            r,
            y,
            k1,
            h,
            rtol,
            atol,
            steps: 0,
            rejected: 0,
        }
    }

    /// Advances by one accepted step of length at most `r_end − r`.
    pub fn step(&mut self, r_end: f64) -> Result<DenseStep<N>, StepError> {
        loop {
            let h = self.h.min(r_end - self.r);
            if h <= 16.0 * f64::EPSILON * self.r.abs().max(1.0) {
                return Err(StepError::Underflow { r: self.r, h });
            }
            let (r, y, k1) = (self.r, self.y, self.k1);
            let f = &self.rhs;
            let k2 = f(r + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(r + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(r + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                r + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                r + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y1 = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(r + h, &y1);

            let mut err2 = 0.0;
            let mut finite = true;
            for i in 0..N {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.atol + self.rtol * y[i].abs().max(y1[i].abs());
                err2 += (e / sc).powi(2);
                finite &= y1[i].is_finite() && k7[i].is_finite();
            }
            let err = (err2 / N as f64).sqrt();

            if !finite || !err.is_finite() {
                self.rejected += 1;
                self.h = h * 0.25;
                if self.h < 16.0 * f64::EPSILON * r.abs().max(1.0) {
                    return Err(StepError::NonFinite { r });
                }
                continue;
            }
            if err > 1.0 {
                self.rejected += 1;
                self.h = h * (SAFETY * err.powf(-0.2)).max(MIN_FACTOR);
                continue;
            }

            let factor = if err == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * err.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };
            let dy: [f64; N] = std::array::from_fn(|i| y1[i] - y[i]);
            let rc3: [f64; N] = std::array::from_fn(|i| h * k1[i] - dy[i]);
            let rc4: [f64; N] = std::array::from_fn(|i| dy[i] - h * k7[i] - rc3[i]);
            let rc5: [f64; N] = std::array::from_fn(|i| {
                h * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i])
            });
            let dense = DenseStep {
                r0: r,
                h,
                y1,
                rcont: [y, dy, rc3, rc4, rc5],
            };
            self.r = if h == r_end - r { r_end } else { r + h };
            self.y = y1;
            self.k1 = k7;
            self.h = h * factor;
            self.steps += 1;
            return Ok(dense);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth_is_accurate() {
        let mut s = Stepper::new(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1e-3, 1e-12, 1e-14);
        while s.r < 1.0 {
            s.step(1.0).unwrap();
        }
        assert!((s.y[0] - 1f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let rhs = |_: f64, y: &[f64; 2]| [y[1], -y[0]];
        let mut s = Stepper::new(rhs, 0.0, [0.0, 1.0], 1e-2, 1e-10, 1e-12);
        let mut worst: f64 = 0.0;
        while s.r < 10.0 {
            let d = s.step(10.0).unwrap();
            for j in 1..10 {
                let r = d.r0 + d.h * j as f64 / 10.0;
                let y = d.at(r);
                worst = worst.max((y[0] - r.sin()).abs()).max((y[1] - r.cos()).abs());
            }
            let end = d.at(d.r1());
            assert!((end[0] - d.y1[0]).abs() < 1e-15);
        }
        assert!(worst < 1e-8, "dense output error {worst}");
        assert!((s.y[0] - 10f64.sin()).abs() < 1e-8);
    }

    #[test]
    fn blow_up_reports_an_error() {
        // y' = y², y(0) = 1 blows up at r = 1.
        let mut s = Stepper::new(|_, y: &[f64; 1]| [y[0] * y[0]], 0.0, [1.0], 1e-3, 1e-10, 1e-12);
        let mut outcome = Ok(());
        for _ in 0..100_000 {
            if let Err(e) = s.step(2.0) {
                outcome = Err(e);
                break;
            }
        }
        assert!(outcome.is_err());
        assert!(s.r < 1.0 + 1e-6);
    }
}
