// Copyright Contributors to the splatpose project
// SPDX-License-Identifier: Apache-2.0

#include <splatpose/losses.hpp>
#include <splatpose/rasterizer.hpp>
#include <splatpose/spectrum.hpp>

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

using namespace splatpose;

namespace {

SceneModel
scene_of(int n) {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<GaussianPrimitive> gs(static_cast<std::size_t>(n));
    for (auto &g : gs) {
        const double z = 2.5 + 1.5 * u(rng);
        g.position = {(u(rng) - 0.5) * 0.7 * z, (u(rng) - 0.5) * 0.7 * z, z};
        g.rotation = Vec4(u(rng) + 0.1, u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5);
        g.log_scales = Vec3::Constant(std::log(0.03 + 0.1 * u(rng)));
        g.opacity_logit = 3.0 * u(rng) - 1.5;
        g.color_logits = {u(rng) - 0.5, u(rng) - 0.5, u(rng) - 0.5};
    }
    return SceneModel(std::move(gs));
}

CameraIntrinsics
intrinsics(int size) {
    CameraIntrinsics K;
    K.width = K.height = size;
    K.fx = K.fy = size;
    K.cx = K.cy = size / 2.0;
    return K;
}

void
BM_Render(benchmark::State &state) {
    const SceneModel scene = scene_of(static_cast<int>(state.range(0)));
    const CameraIntrinsics K = intrinsics(64);
    const double sigma = static_cast<double>(state.range(1));
    for (auto _ : state) {
        benchmark::DoNotOptimize(render(scene, CameraPose{}, {}, K, sigma, Vec3::Zero()));
    }
}
BENCHMARK(BM_Render)->Args({50, 0})->Args({50, 4})->Args({500, 0})->Args({500, 4});

void
BM_RenderBackward(benchmark::State &state) {
    SceneModel scene = scene_of(static_cast<int>(state.range(0)));
    const CameraIntrinsics K = intrinsics(64);
    const double sigma = static_cast<double>(state.range(1));
    const RenderBuffers fwd = render(scene, CameraPose{}, {}, K, sigma, Vec3::Zero());
    const Image weights(64, 64, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(render_backward(fwd, scene, CameraPose{}, {}, K, sigma, weights));
    }
}
BENCHMARK(BM_RenderBackward)->Args({50, 0})->Args({50, 4})->Args({500, 0})->Args({500, 4});

void
BM_PhotometricLoss(benchmark::State &state) {
    const SceneModel scene = scene_of(200);
    const CameraIntrinsics K = intrinsics(static_cast<int>(state.range(0)));
    const Image a = render(scene, CameraPose{}, {}, K, 0.0, Vec3::Zero()).image;
    const Image b = render(scene, CameraPose{}, {}, K, 2.0, Vec3::Zero()).image;
    for (auto _ : state) {
        benchmark::DoNotOptimize(photometric_loss(a, b, {}));
    }
}
BENCHMARK(BM_PhotometricLoss)->Arg(64)->Arg(256);

void
BM_SpectralGradient(benchmark::State &state) {
    const auto comb = spectrum::high_frequency_comb();
    const auto grid = spectrum::resolve_grid(comb, 0.03, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum::spectral_alignment_gradient(comb, 0.03, 0.0, grid));
    }
}
BENCHMARK(BM_SpectralGradient);

void
BM_SpatialOracle(benchmark::State &state) {
    const auto comb = spectrum::high_frequency_comb();
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectrum::spatial_gradient_oracle(comb, 0.03, 0.0));
    }
}
BENCHMARK(BM_SpatialOracle);

} // namespace

BENCHMARK_MAIN();
