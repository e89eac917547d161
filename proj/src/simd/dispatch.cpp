#include "gaplab/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace gaplab::simd {

#if !GAPLAB_HAVE_AVX2
const KernelTable* avx2_kernels() { return nullptr; }
#endif
#if !GAPLAB_HAVE_NEON
const KernelTable* neon_kernels() { return nullptr; }
#endif

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

namespace {

const KernelTable* table_for(Isa isa) {
    switch (isa) {
        case Isa::scalar: return &scalar_kernels();
        case Isa::avx2: return avx2_kernels();
        case Isa::neon: return neon_kernels();
    }
    return nullptr;
}

const KernelTable* pick_default() {
    if (const char* env = std::getenv("GAPLAB_SIMD")) {
        const std::string want(env);
        for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
            if (want == isa_name(isa)) {
                if (const KernelTable* t = table_for(isa)) return t;
            }
        }
    }
    if (const KernelTable* t = avx2_kernels()) return t;
    if (const KernelTable* t = neon_kernels()) return t;
    return &scalar_kernels();
}

std::atomic<const KernelTable*>& slot() {
    static std::atomic<const KernelTable*> current{pick_default()};
    return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

Isa active_isa() { return active().isa; }

bool force_isa(Isa isa) {
    const KernelTable* t = table_for(isa);
    if (t == nullptr) return false;
    slot().store(t, std::memory_order_release);
    return true;
}

}  // namespace gaplab::simd
