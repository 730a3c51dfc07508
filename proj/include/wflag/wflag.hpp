#pragma once

#include "wflag/common.hpp"
#include "wflag/convolution.hpp"
#include "wflag/fibers.hpp"
#include "wflag/hecke.hpp"
#include "wflag/poly.hpp"
#include "wflag/root_data.hpp"
#include "wflag/serialize.hpp"
#include "wflag/weyl.hpp"
