# Lógica del autómata, el catálogo de gliders y la reponderación
