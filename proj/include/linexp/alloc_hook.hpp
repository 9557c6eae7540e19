#pragma once

// Replacement global allocation functions that feed linexp::memory.
// Include from exactly one translation unit of an executable.

#include <cstdlib>
#include <new>

#include "linexp/instrument.hpp"

namespace linexp::memory::detail {

// Room for the size prefix while keeping max_align_t alignment.
inline constexpr std::size_t kHeader = alignof(std::max_align_t);

inline void* counted_alloc(std::size_t n) noexcept {
    void* raw = std::malloc(n + kHeader);
    if (raw == nullptr) {
        return nullptr;
    }
    *static_cast<std::size_t*>(raw) = n;
    on_allocate(n);
    return static_cast<char*>(raw) + kHeader;
}

inline void counted_free(void* p) noexcept {
    if (p == nullptr) {
        return;
    }
    void* raw = static_cast<char*>(p) - kHeader;
    on_deallocate(*static_cast<std::size_t*>(raw));
    std::free(raw);
}

struct HookMarker {
    HookMarker() { stats().hooked.store(true); }
};
inline HookMarker marker;

}  // namespace linexp::memory::detail

void* operator new(std::size_t n) {
    if (void* p = linexp::memory::detail::counted_alloc(n)) {
        return p;
    }
    throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void* operator new(std::size_t n, const std::nothrow_t&) noexcept { return linexp::memory::detail::counted_alloc(n); }
void* operator new[](std::size_t n, const std::nothrow_t&) noexcept {
    return linexp::memory::detail::counted_alloc(n);
}
void operator delete(void* p) noexcept { linexp::memory::detail::counted_free(p); }
void operator delete[](void* p) noexcept { linexp::memory::detail::counted_free(p); }
void operator delete(void* p, std::size_t) noexcept { linexp::memory::detail::counted_free(p); }
void operator delete[](void* p, std::size_t) noexcept { linexp::memory::detail::counted_free(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { linexp::memory::detail::counted_free(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { linexp::memory::detail::counted_free(p); }
