use foxpalette_core::coloring::*;
use foxpalette_core::diagram::Diagram;
use foxpalette_core::modp::{AffineMap, Prime};

fn main() {
    let p = Prime::new(11).unwrap();
    let pd = "X(2,1,5,4);X(4,5,7,6);X(6,7,9,8);X(8,11,10,3);X(11,9,1,12);X(12,2,3,10)";
    let d = Diagram::parse_pd(pd).unwrap();
    let cols = enumerate_nontrivial(&d, p, 200).unwrap();
    // find all colorings whose image is exactly {0,1,4,6,7,8}
    let target = vec![0u32, 1, 4, 6, 7, 8];
    let mut found = 0;
    for c in &cols {
        if c.image_set() == target {
            found += 1;
            if found <= 2 {
                let im = image(&c, &d).unwrap();
                println!("arcs: {:?}", c.arcs);
                println!("crossing colors: {:?}", im.crossing_colors);
            }
        }
    }
    println!("colorings with image exactly 014678: {found}");
    // also: how many distinct recolorings - check via map search from one coloring
    let c0 = &cols[0];
    println!("c0 image: {:?}", c0.image_set());
    let f = AffineMap::all(p).find(|f| {
        let mut im: Vec<u32> = c0.image_set().iter().map(|&x| f.apply_raw(x)).collect();
        im.sort_unstable();
        im == target
    }).unwrap();
    let cn = c0.recolor(f).unwrap();
    let imn = image(&cn, &d).unwrap();
    println!("normalized arcs: {:?}", cn.arcs);
    println!("normalized crossing colors: {:?}", imn.crossing_colors);
}
