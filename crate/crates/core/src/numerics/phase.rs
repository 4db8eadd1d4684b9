use std::f64::consts::PI;

/// Removes `2pi` jumps between consecutive samples.
pub fn unwrap_phase(samples: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(samples.len());
    let mut prev_raw = match samples.first() {
        Some(&first) => {
            out.push(first);
            first
        }
        None => return out,
    };
    let mut acc = prev_raw;
    for &raw in &samples[1..] {
        acc += wrap_to_pi(raw - prev_raw);
        out.push(acc);
        prev_raw = raw;
    }
    out
}

/// Maps an angle onto `(-pi, pi]`.
pub fn wrap_to_pi(x: f64) -> f64 {
    let y = x - 2.0 * PI * (x / (2.0 * PI)).round();
    if y <= -PI {
        y + 2.0 * PI
    } else {
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(unwrap_phase(&[0.0, 0.1, 0.2]), vec![0.0, 0.1, 0.2]);
        let u = unwrap_phase(&[3.0, -3.0]);
        assert_eq!(u[0], 3.0);
        assert!((u[1] - (2.0 * PI - 3.0)).abs() < 1e-15);
        assert!((u[1] - 3.283185307179586).abs() < 1e-12);
        assert_eq!(unwrap_phase(&[1.5; 4]), vec![1.5; 4]);
        assert!(unwrap_phase(&[]).is_empty());
    }

    #[test]
    fn wrap_range() {
        assert_eq!(wrap_to_pi(PI), PI);
        assert_eq!(wrap_to_pi(-PI), PI);
        assert!((wrap_to_pi(3.0 * PI + 0.1) - (-PI + 0.1)).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn recovers_continuous_signal(
                start in -10.0..10.0f64,
                steps in proptest::collection::vec(-3.0..3.0f64, 1..200),
            ) {
                let mut truth = vec![start];
                for s in &steps {
                    let last = *truth.last().unwrap();
                    truth.push(last + s);
                }
                let wrapped: Vec<f64> = truth.iter().map(|&x| wrap_to_pi(x)).collect();
                let un = unwrap_phase(&wrapped);
                prop_assert_eq!(un[0], wrapped[0]);
                for w in un.windows(2) {
                    prop_assert!((w[1] - w[0]).abs() <= PI);
                }
                let offset = un[0] - truth[0];
                for (u, t) in un.iter().zip(&truth) {
                    prop_assert!((u - t - offset).abs() < 1e-9);
                }
            }
        }
    }
}
