# Tests para servicios 