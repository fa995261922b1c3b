use std::time::Instant;
use ucount_core::cnf::{formula, sat_count};
use ucount_core::gadgets::Mode;
use ucount_core::num::{rat, sign_pow};
use ucount_core::{oracle, reduce};

fn main() {
    let cases = [
        ("or3", formula(3, &[[1, 2, 3]])),
        ("xor-ish", formula(2, &[[1, 2, 2], [-1, -2, -2]])),
        ("exclude-extremes", formula(3, &[[1, 2, 3], [-1, -2, -3]])),
        ("three-var-two-clause", formula(3, &[[1, -2, 3], [2, -3, -1]])),
    ];
    for (name, phi) in cases {
        let expected = rat(sat_count(&phi).unwrap() as i64);
        let t0 = Instant::now();
        let perm = reduce::compile(&phi, Mode::Perm).unwrap();
        let g = perm.embedded.graph.clone();
        let tc = t0.elapsed();
        let t1 = Instant::now();
        let up = oracle::uperm(&g);
        let tp = t1.elapsed();
        assert_eq!(up, expected, "{name} perm");
        let det = reduce::compile(&phi, Mode::Det).unwrap();
        let t2 = Instant::now();
        let ud = oracle::udet(&det.embedded.graph);
        let td = t2.elapsed();
        assert_eq!(sign_pow(phi.clause_count()) * ud, expected, "{name} det");
        println!(
            "{name}: V={} E={} compile {tc:?} uperm {tp:?} udet {td:?} => {expected}",
            g.n_vertices(),
            g.n_edges()
        );
    }
}
