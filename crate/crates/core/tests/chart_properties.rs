use fieldmon_core::chart::{emit_distribution, emit_tagcloud, render_svg, ChartKind, Mark, HEIGHT, WIDTH};
use fieldmon_core::indicators::DistributionResult;
use proptest::prelude::*;

fn distribution(counts: &[u64]) -> DistributionResult {
    DistributionResult {
        counts: counts.iter().enumerate().map(|(i, c)| (format!("label {i:02}"), *c)).collect(),
        total_projects: counts.iter().sum(),
        unmapped: None,
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * b.abs().max(1e-300)
}

proptest! {
    #[test]
    fn pie_and_treemap_are_proportional(counts in prop::collection::vec(0u64..500, 1..12)) {
        let result = distribution(&counts);
        let total: u64 = counts.iter().sum();
        let pie = emit_distribution(&result, ChartKind::Pie, "p").unwrap();
        let treemap = emit_distribution(&result, ChartKind::Treemap, "t").unwrap();
        prop_assert_eq!(pie.empty, total == 0);
        for mark in pie.marks {
            let Mark::Slice { value, start_angle, end_angle, .. } = mark else { panic!() };
            prop_assert!(close(end_angle - start_angle, 360.0 * value as f64 / total as f64));
        }
        for mark in treemap.marks {
            let Mark::Rect { value, width, height, .. } = mark else { panic!() };
            prop_assert!(close(width * height, WIDTH * HEIGHT * value as f64 / total as f64));
        }
    }

    #[test]
    fn tag_sizes_are_monotone(counts in prop::collection::vec(0u64..50, 1..12)) {
        let spec = emit_tagcloud(&distribution(&counts), "t");
        let words: Vec<(u64, f64)> = spec.marks.iter().map(|m| match m {
            Mark::Word { value, size, .. } => (*value, *size),
            _ => panic!(),
        }).collect();
        prop_assert_eq!(words.len(), counts.iter().filter(|c| **c > 0).count());
        for a in &words {
            prop_assert!((12.0..=48.0).contains(&a.1));
            for b in &words {
                if a.0 > b.0 { prop_assert!(a.1 > b.1); }
                if a.0 == b.0 { prop_assert_eq!(a.1, b.1); }
            }
        }
    }

    #[test]
    fn svg_is_deterministic(counts in prop::collection::vec(0u64..50, 0..8), kind in 2usize..7) {
        let kind = ChartKind::ALL[kind];
        let spec = emit_distribution(&distribution(&counts), kind, "x & y").unwrap();
        let svg = render_svg(&spec);
        prop_assert_eq!(&svg, &render_svg(&spec));
        prop_assert!(svg.starts_with("<svg ") && svg.ends_with("</svg>\n"));
    }
}
