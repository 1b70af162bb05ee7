use std::cell::RefCell;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// In-place N-dimensional DFT, one axis at a time. The inverse is normalized
/// by `n^{−N}` so that `inverse ∘ forward` is the identity.
pub fn fft_nd(data: &mut [Complex64], grid: &GridSpec, inverse: bool) {
    let n = grid.points;
    debug_assert_eq!(data.len(), grid.len());
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    let mut line = vec![Complex64::default(); n];
    for axis in 0..grid.dim {
        let stride = n.pow((grid.dim - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for off in 0..stride {
                let start = base + off;
                for (j, v) in line.iter_mut().enumerate() {
                    *v = data[start + j * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (j, v) in line.iter().enumerate() {
                    data[start + j * stride] = *v;
                }
            }
        }
    }
    if inverse {
        let s = 1.0 / grid.len() as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_3d() {
        let g = GridSpec::new(3, 1.0, 8).unwrap();
        let orig: Vec<Complex64> = (0..g.len())
            .map(|i| Complex64::new((i as f64 * 0.37).sin(), (i as f64 * 0.11).cos()))
            .collect();
        let mut d = orig.clone();
        fft_nd(&mut d, &g, false);
        fft_nd(&mut d, &g, true);
        for (a, b) in d.iter().zip(&orig) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn separable_delta() {
        // A delta at the origin transforms to all ones.
        let g = GridSpec::new(2, 1.0, 8).unwrap();
        let mut d = vec![Complex64::default(); g.len()];
        d[0] = Complex64::new(1.0, 0.0);
        fft_nd(&mut d, &g, false);
        assert!(d.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }
}
