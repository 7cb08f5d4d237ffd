#ifndef TACHYON_TACHYON_HPP
#define TACHYON_TACHYON_HPP

#include "tachyon/big_real.hpp"
#include "tachyon/fields.hpp"
#include "tachyon/keyvalue.hpp"
#include "tachyon/nullcone.hpp"
#include "tachyon/precision.hpp"
#include "tachyon/scan.hpp"
#include "tachyon/selfforce.hpp"
#include "tachyon/tunnel.hpp"
#include "tachyon/vec3.hpp"

#endif
