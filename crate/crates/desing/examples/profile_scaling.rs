use std::time::Instant;

use desing::algebra::{Ideal, VarContext};
use desing::basic_object::object_from_ideal;
use desing::resolver::{resolve, Limits};
use desing::verify::check_weak_equiv_scaling;

fn main() {
    let plane = VarContext::new(&["x", "y"]);
    let space = VarContext::new(&["x", "y", "z"]);
    let corpus = vec![
        ("x^2 - y^3", plane.clone(), Ideal::parse(&plane, &["x^2 - y^3"])),
        ("x^2 - y^5", plane.clone(), Ideal::parse(&plane, &["x^2 - y^5"])),
        ("<x^2, y^3>", plane.clone(), Ideal::parse(&plane, &["x^2", "y^3"])),
        ("x*y*(x + y)", plane.clone(), Ideal::parse(&plane, &["x*y*(x + y)"])),
        ("x^2 - z*y^2", space.clone(), Ideal::parse(&space, &["x^2 - z*y^2"])),
    ];
    for (name, ctx, j) in &corpus {
        for k in [1u64, 2, 3] {
            let t0 = Instant::now();
            let object = object_from_ideal(ctx, j.power(k), 2 * k, &[]).unwrap();
            let tree = resolve(object, &Limits::default()).unwrap();
            println!(
                "resolve {name} k={k}: {} nodes in {:?}",
                tree.nodes.len(),
                t0.elapsed()
            );
        }
        for k in [2u64, 3] {
            let t0 = Instant::now();
            let cert = check_weak_equiv_scaling(ctx, j, 2, k).unwrap();
            println!(
                "scalecheck {name} k={k}: pass={} in {:?}",
                cert.pass,
                t0.elapsed()
            );
        }
    }
    println!("profile done");
}
