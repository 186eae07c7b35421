//! Every example must keep running.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));
        }

        #[test]
        fn $name() {
            $name::run().expect("example runs");
        }
    };
}

example!(pentagon_capacity);
example!(graph_algebra);
example!(lemma_antichain);
example!(privileged_senders);
example!(certificate_check);
example!(rainbow_coloring);
