// One-off: scan all W(3) chambers for a non-C1, non-parabolic decomposition
// (open-question search; outcome recorded in the decisions ledger).
use superlie::realize::build_family;
use superlie::roots::root_datum;
use superlie::triangular::{check_conditions, enumerate_chambers};

fn main() {
    let g = build_family("W:3").unwrap();
    let d = root_datum(&g).unwrap();
    let chambers = enumerate_chambers(&g, &d).unwrap();
    let mut non_c1_non_parabolic = 0usize;
    let mut non_c1 = 0usize;
    let mut example_shown = false;
    for dec in &chambers {
        let f = check_conditions(&g, &d, dec).unwrap();
        if !f.c1 {
            non_c1 += 1;
            if !f.parabolic {
                non_c1_non_parabolic += 1;
                if !example_shown {
                    example_shown = true;
                    println!("example witness: {:?}", dec.witness.to_dense().iter().map(|x| x.to_string()).collect::<Vec<_>>());
                    let pos: Vec<String> = dec.positive_indices().iter().map(|&i| format!("{:?}@{}", d.roots[i].eps.as_ref().unwrap(), d.roots[i].height.unwrap())).collect();
                    println!("positive roots: {}", pos.join(" "));
                    // manual re-check: r + n+ closed?
                    let r = g.reductive_part();
                    let p = r.sum(&dec.n_plus);
                    let mut closed = true;
                    for a in &p.basis {
                        for b in &p.basis {
                            let w = g.bracket_vec(a, b);
                            if !w.is_zero() && !p.contains(&w) { closed = false; }
                        }
                    }
                    println!("r+n+ dim {} of {}, closed={}", p.dim(), g.dim(), closed);
                    // n-_0bar inside r?
                    let mut even_minus_in_r = true;
                    for (i, root) in d.roots.iter().enumerate() {
                        if !dec.positive[i] && root.parity == superlie::superalg::Parity::Even {
                            for v in &root.space {
                                if !r.contains(v) { even_minus_in_r = false; }
                            }
                        }
                    }
                    println!("n-_0bar in r: {}", even_minus_in_r);
                }
            }
        }
    }
    println!(
        "W(3): {} chambers, {} non-C1, {} non-C1 and non-parabolic",
        chambers.len(),
        non_c1,
        non_c1_non_parabolic
    );
}
