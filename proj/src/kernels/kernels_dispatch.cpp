#include "qprob/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace qprob::kernels {

const KernelTable& active() {
    static const KernelTable* const table = [] {
        const char* env = std::getenv("QPROB_KERNELS");
        if (env && std::strcmp(env, "scalar") == 0) return &scalar_table();
        if (const KernelTable* simd = avx2_table()) return simd;
        return &scalar_table();
    }();
    return *table;
}

}  // namespace qprob::kernels
