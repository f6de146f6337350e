import math

import numpy as np
import pytest

from urbscale import (
    Block,
    CityDataset,
    ClassAggregate,
    aggregate_classes,
    box_counting_dimension,
    city_indicator,
    fractal_spectrum,
    scaling_indicator,
)
from urbscale.cluster1d import kmeans_1d_exact
from urbscale.errors import DegenerateSpectrumError, InsufficientClassesError
from urbscale.scaling import city_spectrum
from urbscale.stats import ols

from conftest import make_power_law_city, make_random_city


def city_of(blocks):
    return CityDataset("t", tuple(Block(f"B{i}", a, p) for i, (a, p) in enumerate(blocks)))


class TestAggregateClasses:
    def test_single_class_sums(self):
        ds = city_of([(2.0, 100), (3.0, 200)])
        classing = kmeans_1d_exact(np.sort([100 / 2.0, 200 / 3.0]), 1)
        (agg,) = aggregate_classes(ds, classing)
        assert agg.area_aj == 5.0
        assert agg.population_pj == 300
        assert agg.density_rhoj == 60.0

    def test_identity_partition(self):
        ds = city_of([(1.0, 10), (2.0, 100), (1.0, 400)])
        densities = np.sort([10.0, 50.0, 400.0])
        classing = kmeans_1d_exact(densities, 3)
        aggs = aggregate_classes(ds, classing)
        assert [(g.area_aj, g.population_pj) for g in aggs] == [(1.0, 10), (2.0, 100), (1.0, 400)]

    def test_merging_identical_density_blocks_is_invisible(self):
        split = city_of([(1.0, 100), (1.0, 100), (4.0, 80)])
        merged = city_of([(2.0, 200), (4.0, 80)])
        cls_split = kmeans_1d_exact(np.sort([100.0, 100.0, 20.0]), 2)
        cls_merged = kmeans_1d_exact(np.sort([100.0, 20.0]), 2)
        a = aggregate_classes(split, cls_split)
        b = aggregate_classes(merged, cls_merged)
        assert [(g.area_aj, g.population_pj, g.density_rhoj) for g in a] == [
            (g.area_aj, g.population_pj, g.density_rhoj) for g in b
        ]

    def test_mismatched_classing_rejected(self):
        ds = city_of([(1.0, 10), (2.0, 100)])
        classing = kmeans_1d_exact(np.array([1.0, 2.0, 3.0]), 2)
        with pytest.raises(ValueError, match="positive-density blocks"):
            aggregate_classes(ds, classing)


def aggs_from(pairs):
    return [ClassAggregate(j, a, max(1, round(rho * a)), rho) for j, (rho, a) in enumerate(pairs)]


class TestScalingIndicator:
    def test_two_class_hand_case_with_midpoint(self):
        aggs = aggs_from([(100.0, 100.0), (316.227766, 31.6227766), (1000.0, 10.0)])
        result = scaling_indicator(aggs)
        assert abs(result.ds - 1.0) <= 1e-12
        assert abs(result.r_squared - 1.0) <= 1e-12
        assert result.n_classes_used == 3

    def test_closed_form_power_law(self):
        rhos = [10.0**m for m in range(1, 11)]
        aggs = aggs_from([(rho, 5000.0 * rho**-1.7) for rho in rhos])
        result = scaling_indicator(aggs)
        assert abs(result.ds - 1.7) <= 1e-9

    def test_flat_areas_give_zero(self):
        aggs = aggs_from([(10.0, 7.0), (100.0, 7.0), (1000.0, 7.0)])
        assert scaling_indicator(aggs).ds == 0.0

    def test_points_are_log_inverse_density_vs_log_area(self):
        aggs = aggs_from([(10.0, 100.0), (100.0, 10.0), (1000.0, 1.0)])
        result = scaling_indicator(aggs)
        assert result.points[0] == (-1.0, 2.0)
        assert result.points[-1] == (-3.0, 0.0)

    def test_too_few_classes(self):
        with pytest.raises(InsufficientClassesError):
            scaling_indicator(aggs_from([(10.0, 1.0), (100.0, 2.0)]))

    def test_equal_densities_degenerate(self):
        aggs = aggs_from([(10.0, 1.0), (10.0, 2.0), (10.0, 3.0)])
        with pytest.raises(DegenerateSpectrumError):
            scaling_indicator(aggs)

    def test_three_class_monotone_disparity(self):
        # growing the lowest-density class area strictly grows the indicator
        previous = -math.inf
        for a1 in (10.0, 20.0, 80.0, 400.0):
            aggs = aggs_from([(10.0, a1), (100.0, 8.0), (1000.0, 1.0)])
            ds = scaling_indicator(aggs).ds
            assert ds > previous
            previous = ds

    def test_two_class_monotone_disparity_closed_form(self):
        # the 2-point slope (log a1 - log a2) / (log rho2 - log rho1) in a1
        rho1, rho2, a2 = 50.0, 800.0, 4.0
        previous = -math.inf
        for a1 in (5.0, 9.0, 40.0, 1000.0):
            fit = ols(
                [-math.log10(rho1), -math.log10(rho2)],
                [math.log10(a1), math.log10(a2)],
            )
            assert fit.slope > previous
            previous = fit.slope


class TestCityIndicator:
    def test_recovers_power_law_exponent(self):
        for d in (0.8, 1.4, 2.1):
            city = make_power_law_city(d)
            ind = city_indicator(city, 10)
            assert abs(ind.scaling.ds - d) <= 1e-9

    def test_identical_density_city_degenerate(self):
        ds = city_of([(1.0, 50), (2.0, 100), (4.0, 200)])
        with pytest.raises(DegenerateSpectrumError):
            city_indicator(ds, 3)

    def test_doubling_blocks_preserves_indicator(self):
        city = make_random_city(np.random.default_rng(3), 50)
        doubled = CityDataset(
            "t2", tuple(Block(b.block_id, b.area * 2, b.population * 2) for b in city.blocks)
        )
        a = city_indicator(city, 8)
        b = city_indicator(doubled, 8)
        assert abs(a.scaling.ds - b.scaling.ds) <= 1e-12
        assert a.mean_density == b.mean_density

    def test_zero_population_blocks_excluded_and_counted(self):
        rng = np.random.default_rng(4)
        city = make_random_city(rng, 80, zero_pop_fraction=0.3)
        ind = city_indicator(city, 5)
        zero = sum(1 for b in city.blocks if b.population == 0)
        assert ind.n_blocks_zero_population == zero
        assert ind.n_blocks_used == 80 - zero

    def test_classes_lowered_with_warning(self):
        ds = city_of([(1.0, 10), (1.0, 20), (1.0, 40), (1.0, 80)])
        ind = city_indicator(ds, 10)
        assert ind.classes_used == 4
        assert any("lowered" in w for w in ind.warnings)

    def test_mean_density_is_population_over_area(self):
        ds = city_of([(2.0, 100), (3.0, 200), (5.0, 0), (1.0, 40)])
        ind = city_indicator(ds, 3)
        assert ind.mean_density == pytest.approx(340 / 6.0, rel=1e-15)
        assert ind.populated_area == 6.0
        assert ind.total_area == 11.0


class TestBoxCounting:
    def test_area_like_scaling(self):
        assert box_counting_dimension([(0.1, 100), (0.01, 10000)]) == pytest.approx(2.0, abs=1e-12)

    def test_line_like_scaling(self):
        assert box_counting_dimension([(0.1, 10), (0.01, 100)]) == pytest.approx(1.0, abs=1e-12)

    def test_flat_counts(self):
        assert box_counting_dimension([(0.5, 7), (0.1, 7), (0.01, 7)]) == 0.0

    def test_degenerate_inputs(self):
        with pytest.raises(InsufficientClassesError):
            box_counting_dimension([(0.1, 10)])
        with pytest.raises(DegenerateSpectrumError):
            box_counting_dimension([(0.1, 10), (0.1, 20)])
        with pytest.raises(ValueError):
            box_counting_dimension([(1.5, 10), (0.1, 20)])
        with pytest.raises(ValueError):
            box_counting_dimension([(0.5, 0), (0.1, 20)])


class TestFractalSpectrum:
    def test_single_band(self):
        bands, svg = fractal_spectrum(aggs_from([(100.0, 5.0)]))
        assert len(bands) == 1
        assert bands[0].color_bin == 0
        assert svg.count("<rect") == 2  # background + band

    def test_equal_areas_share_a_bin(self):
        bands, _ = fractal_spectrum(aggs_from([(10.0, 5.0), (100.0, 5.0)]))
        assert bands[0].color_bin == bands[1].color_bin

    def test_quantile_bins_for_three_areas(self):
        bands, _ = fractal_spectrum(
            aggs_from([(10.0, 1.0), (100.0, 10.0), (1000.0, 100.0)]), n_bins=3
        )
        assert [b.color_bin for b in bands] == [0, 1, 2]

    def test_bands_ordered_by_density_and_area_conserved(self):
        aggs = aggs_from([(1000.0, 1.0), (10.0, 50.0), (100.0, 10.0)])
        bands, _ = fractal_spectrum(aggs)
        assert [b.density_rhoj for b in bands] == sorted(b.density_rhoj for b in bands)
        assert sum(b.area_aj for b in bands) == sum(g.area_aj for g in aggs)

    def test_city_spectrum_covers_populated_area(self):
        city = make_random_city(np.random.default_rng(8), 40)
        bands, svg = city_spectrum(city, 6)
        populated = sum(b.area for b in city.blocks if b.population > 0)
        assert sum(b.area_aj for b in bands) == pytest.approx(populated, rel=1e-12)
        assert svg.startswith("<svg")

    def test_city_spectrum_single_class(self):
        ds = city_of([(1.0, 50), (2.0, 100)])  # one distinct density
        bands, _ = city_spectrum(ds, 10)
        assert len(bands) == 1


class TestInvariances:
    def base_city(self):
        return make_random_city(np.random.default_rng(21), 70)

    def test_block_permutation(self):
        city = self.base_city()
        rng = np.random.default_rng(77)
        blocks = list(city.blocks)
        rng.shuffle(blocks)
        shuffled = CityDataset("p", tuple(blocks))
        a = city_indicator(city, 9).scaling.ds
        b = city_indicator(shuffled, 9).scaling.ds
        assert abs(a - b) <= 1e-12

    def test_equal_density_split(self):
        city = self.base_city()
        blocks = []
        for b in city.blocks:
            if b.population % 2 == 0 and b.population > 0:
                blocks.append(Block(b.block_id + "a", b.area / 2, b.population // 2))
                blocks.append(Block(b.block_id + "b", b.area / 2, b.population // 2))
            else:
                blocks.append(b)
        split = CityDataset("s", tuple(blocks))
        a = city_indicator(city, 9).scaling.ds
        b = city_indicator(split, 9).scaling.ds
        assert abs(a - b) <= 1e-12

    def test_area_unit_conversion(self):
        city = self.base_city()
        converted = CityDataset(
            "m2", tuple(Block(b.block_id, b.area * 1e6, b.population) for b in city.blocks)
        )
        a = city_indicator(city, 9).scaling.ds
        b = city_indicator(converted, 9).scaling.ds
        assert abs(a - b) <= 1e-12

    def test_population_doubling(self):
        city = self.base_city()
        doubled = CityDataset(
            "x2", tuple(Block(b.block_id, b.area, b.population * 2) for b in city.blocks)
        )
        a = city_indicator(city, 9)
        b = city_indicator(doubled, 9)
        assert abs(a.scaling.ds - b.scaling.ds) <= 1e-12
        assert b.mean_density == pytest.approx(2 * a.mean_density, rel=1e-15)

    def test_collinear_r_squared_is_one(self):
        city = make_power_law_city(1.7)
        assert abs(city_indicator(city, 10).scaling.r_squared - 1.0) <= 1e-12
