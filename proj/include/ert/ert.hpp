#ifndef ERT_ERT_HPP
#define ERT_ERT_HPP

#include "ert/certificate.hpp"
#include "ert/error.hpp"
#include "ert/geometry.hpp"
#include "ert/image_io.hpp"
#include "ert/microlocal.hpp"
#include "ert/parallel.hpp"
#include "ert/phantom.hpp"
#include "ert/phantom_io.hpp"
#include "ert/quadrature.hpp"
#include "ert/sinogram_io.hpp"
#include "ert/transform.hpp"
#include "ert/vec2.hpp"

#endif  // ERT_ERT_HPP
