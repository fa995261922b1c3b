use ucount_core::cnf::formula;
use ucount_core::gadgets::Mode;
use ucount_core::reduce;

fn main() {
    std::env::set_var("UCOUNT_DEBUG_ROUTE", "1");
    let phi = formula(2, &[[1, 2, 2], [-1, -2, -2]]);
    let c = reduce::compile(&phi, Mode::Perm).unwrap();
    println!(
        "V={} E={}",
        c.embedded.graph.n_vertices(),
        c.embedded.graph.n_edges()
    );
}
