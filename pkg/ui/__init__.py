# UI module