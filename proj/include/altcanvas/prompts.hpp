#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace altcanvas::prompts {

// Placeholders use the ${name} form and are substituted by fill().

inline constexpr std::string_view kTactileImage =
    "Create ONLY ONE DIGITAL graphic of the ${mainObject} \n"
    "This graphic should be VERY SIMPLE and MINIMAL, focusing on the core shape and essence of the object. \n"
    "Avoid adding any perspectives, intricate details, or text to the design. \n"
    "The goal is to capture the simplicity and clarity of the object in a minimalistic style.\n"
    "Ensure that the lines are clean and the overall design is straightforward. \n"
    "The user has specifically requested the following object: ${voiceText}. \n"
    "Please adhere strictly to these guidelines to achieve the desired outcome.";

inline constexpr std::string_view kColorImage =
    "Create ONLY ONE DIGITAL color illustration of the ${mainObject} \n"
    "Show a single object on a plain white background. \n"
    "Do not include any text, letters, or numbers in the image. \n"
    "The user has specifically requested the following object: ${voiceText}.";

inline constexpr std::string_view kGlobalDescription =
    "Provide a one-line brief description of what the image looks like. \n"
    "Describe the layout of the images on a canvas based on their coordinates\n"
    "and sizes verbally, without using exact numbers. Avoid stating specific\n"
    "shapes like \"square.\" Mention if one image appears to be placed on top\n"
    "of another, noting any spaces above or below the image.";

inline constexpr std::string_view kLocalDescription =
    "The image is called ${image.name}. It is located at x-coordinate\n"
    "${image.coordinate.x} and y-coordinate ${image.coordinate.y}.\n"
    "The size of the image is ${image.sizeParts.width} in width\n"
    "and ${image.sizeParts.height} in height. \n"
    "Additional description: ${image.descriptions}.    ";

inline constexpr std::string_view kChat =
    "You are describing an image to a Visually Impaired Person. Keep the description brief\n"
    "and straightforward. Generate the given image description according to the\n"
    "following criteria: ${voiceText}.";

// Question used when asking the backend to describe a freshly generated object.
inline constexpr std::string_view kObjectDescriptionQuestion =
    "Describe the object in this image in one or two sentences.";

using Bindings = std::vector<std::pair<std::string_view, std::string>>;

/// Replaces every ${key} in tmpl. Unknown placeholders are left untouched.
std::string fill(std::string_view tmpl, const Bindings& bindings);

/// Collapses whitespace runs to single spaces and trims the ends.
std::string squash_whitespace(std::string_view text);

} // namespace altcanvas::prompts
