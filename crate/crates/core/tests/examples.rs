// Every example must keep running.

macro_rules! example {
    ($name:ident) => {
        #[allow(dead_code)]
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                run_example().unwrap();
            }
        }
    };
}

example!(weak_value);
example!(spectral_probe);
example!(postselection_oracle);
example!(working_range);
example!(figure2);
example!(figure3);
example!(delay_estimation);
example!(convention_factor);
example!(config_report);
