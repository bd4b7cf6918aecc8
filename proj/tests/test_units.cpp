#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "radrel/units.hpp"

using namespace radrel;

TEST_CASE("fit from cross-section") {
    // Sum of the bundled per-device PL cross-sections.
    const double sigma_pl = 2.01e-8 + 8.42e-8 + 1.22e-8;
    CHECK(fit_from_cross_section(sigma_pl, Flux(13)).value() == doctest::Approx(1514.5).epsilon(1e-12));

    CHECK(fit_from_cross_section(0, Flux(13)).none_observed());

    CHECK(fit_from_cross_section(5.28e-8, Flux(13)).value() ==
          doctest::Approx(686.4).epsilon(1e-12));

    CHECK_THROWS_AS(fit_from_cross_section(-1e-9, Flux(13)), ValidationError);
    CHECK_THROWS_AS(Flux(-1), ValidationError);
}

TEST_CASE("mean time from fit") {
    const auto mttu = mean_time_from_fit(FitRate(1514.5), MeanTimeTo::Kind::upset);
    REQUIRE(mttu.has_value());
    CHECK(mttu->hours == doctest::Approx(660283.92).epsilon(1e-6));
    CHECK(mttu->months() == doctest::Approx(903.879).epsilon(1e-4));

    const auto unit = mean_time_from_fit(FitRate(1e9), MeanTimeTo::Kind::failure);
    REQUIRE(unit.has_value());
    CHECK(unit->hours == doctest::Approx(1.0));

    const auto lfric = mean_time_from_fit(FitRate(3.89), MeanTimeTo::Kind::failure);
    REQUIRE(lfric.has_value());
    CHECK(lfric->hours == doctest::Approx(2.5707e8).epsilon(1e-4));
    CHECK(lfric->months() == doctest::Approx(351910).epsilon(1e-3));

    CHECK_FALSE(mean_time_from_fit(FitRate(0), MeanTimeTo::Kind::upset).has_value());
}

TEST_CASE("fluence from exposure") {
    const Fluence f = Fluence::from_exposure(Flux(13), 100.0);
    CHECK(f.n_per_cm2() == doctest::Approx(1300.0));
    CHECK_THROWS_AS(Fluence(-1), ValidationError);
}

TEST_CASE("dimensional round trip") {
    const double sigmas[] = {1e-16, 3.3e-10, 1.165e-7, 2.5};
    const double fluxes[] = {0.1, 13, 6500};
    for (double sigma : sigmas) {
        for (double flux : fluxes) {
            const FitRate fit = fit_from_cross_section(sigma, Flux(flux));
            const auto mt = mean_time_from_fit(fit, MeanTimeTo::Kind::failure);
            REQUIRE(mt.has_value());
            CHECK(mt->hours * sigma * flux * 1e9 == doctest::Approx(1e9).epsilon(1e-12));
        }
    }
}

TEST_CASE("linearity in flux") {
    const double sigma = 4.7e-9;
    const FitRate base = fit_from_cross_section(sigma, Flux(13));
    for (double k : {2.0, 500.0, 1000.0, 0.25}) {
        const FitRate scaled = fit_from_cross_section(sigma, Flux(13 * k));
        CHECK(scaled.value() == doctest::Approx(base.value() * k).epsilon(1e-12));
        const auto mt = mean_time_from_fit(scaled, MeanTimeTo::Kind::failure);
        const auto mt_base = mean_time_from_fit(base, MeanTimeTo::Kind::failure);
        CHECK(mt->hours == doctest::Approx(mt_base->hours / k).epsilon(1e-12));
    }
}

TEST_CASE("additivity across categories") {
    const FitRate a(1.5), b(2.25), c(0.125);
    CHECK((a + b + c).value() == doctest::Approx(3.875).epsilon(1e-15));
    // FitRate(0) is the identity.
    CHECK((a + FitRate()).value() == a.value());
}
