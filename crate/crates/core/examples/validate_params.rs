//! Parameter tiers and derived constants.

use ncg::{ModelParams, ValidationTier};

fn main() {
    let cases = [
        (4, 0.5, 0.5, 0.5),
        (3, 1.0, 0.0, 1.0),
        (5, 0.5, 0.0, 0.0),
        (3, 1.0, 0.5, 0.5),
        (3, 0.5, 1.0, 1.0),
        (2, 0.5, 0.5, 0.5),
    ];
    for (n, p, q, r) in cases {
        let m = ModelParams {
            clique_size: n,
            p,
            q,
            r,
        };
        let simulable = m.validate(ValidationTier::Simulable);
        let theorem = m.validate(ValidationTier::TheoremGrade);
        let show = |v: &[ncg::params::Violation]| {
            if v.is_empty() {
                "ok".to_string()
            } else {
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            }
        };
        print!(
            "N={n} p={p} q={q} r={r}: simulable [{}], theorem-grade [{}]",
            show(&simulable),
            show(&theorem)
        );
        match m.derive_constants() {
            Ok(c) => println!(
                "  alpha={:.4} beta={:.4} exponent={}",
                c.alpha,
                c.beta,
                c.gamma_exponent
                    .map_or("none".into(), |g| format!("{g:.4}"))
            ),
            Err(_) => println!(),
        }
    }
}
