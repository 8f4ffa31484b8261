#include "forenskit/descriptors.hpp"

#include <algorithm>

#include "forenskit/layout.hpp"

namespace forenskit {

const DescriptorRegistry& bundled_descriptors() {
  static const DescriptorRegistry registry = [] {
    DescriptorRegistry r;
    r.add({"bootloader-unsigned-boot",
           "Bootloader flaw that permits one unsigned boot from memory until the next reboot.",
           false, true, {}, {}, true});

    Bytes su(layout::kSuSlotSize, 0);
    const std::string su_text = "fsk-su-binary-v1";
    std::copy(su_text.begin(), su_text.end(), su.begin());
    r.add({"opaque-root", "Closed-source rooting kit; effects undocumented.", true, true, {},
           {{"@system.su", su}}, false});

    Bytes recovery(32, 0xA5);
    r.add({"recovery-flash", "Flashes a custom recovery image header.", false, true,
           {{"recovery@0+32", recovery}}, {{"recovery@0+32", recovery}}, true});

    r.add({"vendor-unlock-tool", "Vendor tool that enables live boot.", false, true,
           {{"@bootloader.live_boot", to_bytes("1")}},
           {{"@bootloader.live_boot", to_bytes("1")}, {"@bootloader.verity", to_bytes("0")}},
           false});
    return r;
  }();
  return registry;
}

}  // namespace forenskit
